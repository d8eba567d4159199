//! Resolution of expressions to export paths of the analyzed package.

use std::collections::HashMap;

use oxc_ast::ast::{Argument, CallExpression, ChainElement, Expression, MemberExpression};

use super::scope::{ScopeCursor, ScopeId, ScopeTree};
use super::ImportBinding;
use crate::advisory::ExportPath;

/// What an expression denotes in terms of the package's exports.
#[derive(Debug, Clone)]
pub(crate) struct Resolved {
    pub path: ExportPath,
    /// An ESM namespace object with no property access applied yet.
    pub namespace: bool,
    /// Binding the expression is rooted in, if any.
    pub via: Option<usize>,
    /// Start offset of an inline `require(...)` the expression is rooted in.
    pub require_at: Option<u32>,
}

impl Resolved {
    pub fn member(&self, name: &str) -> Resolved {
        let path = if self.namespace && name == "default" {
            self.path.clone()
        } else {
            self.path.child(name)
        };
        Resolved {
            path,
            namespace: false,
            via: self.via,
            require_at: self.require_at,
        }
    }
}

/// Outcome of matching a module specifier against the package name.
pub(crate) enum SpecifierMatch {
    NotThisPackage,
    Path(ExportPath),
    /// The package, but a subpath that cannot be written as an export path.
    Unrepresentable,
}

pub(crate) fn match_specifier(package: &str, specifier: &str) -> SpecifierMatch {
    if specifier == package {
        return SpecifierMatch::Path(ExportPath::root());
    }
    let Some(rest) = specifier.strip_prefix(package).and_then(|r| r.strip_prefix('/')) else {
        return SpecifierMatch::NotThisPackage;
    };
    let mut segments: Vec<&str> = rest.split('/').filter(|s| !s.is_empty()).collect();
    if let Some(last) = segments.last_mut() {
        for ext in [".js", ".cjs", ".mjs"] {
            if let Some(stem) = last.strip_suffix(ext) {
                *last = stem;
                break;
            }
        }
    }
    if segments.last() == Some(&"index") {
        segments.pop();
    }
    if segments.iter().any(|s| s.is_empty() || s.contains('.')) {
        return SpecifierMatch::Unrepresentable;
    }
    SpecifierMatch::Path(ExportPath::new(segments))
}

/// A string-valued literal: string literal or substitution-free template.
pub(crate) fn literal_string<'e>(expr: &'e Expression<'_>) -> Option<&'e str> {
    match expr.without_parentheses() {
        Expression::StringLiteral(s) => Some(s.value.as_str()),
        Expression::TemplateLiteral(t) if t.expressions.is_empty() && t.quasis.len() == 1 => {
            t.quasis[0].value.cooked.as_ref().map(|c| c.as_str())
        }
        _ => None,
    }
}

/// Static property key of a computed access, if the key is a literal.
pub(crate) fn static_key(expr: &Expression<'_>) -> Option<String> {
    if let Some(s) = literal_string(expr) {
        return Some(s.to_string());
    }
    match expr.without_parentheses() {
        Expression::NumericLiteral(n) if n.value.fract() == 0.0 && n.value >= 0.0 && n.value < 1e15 => {
            Some(format!("{}", n.value as u64))
        }
        _ => None,
    }
}

/// Name resolution state shared by the binding and call passes.
pub(crate) struct Env<'t> {
    pub tree: &'t ScopeTree,
    pub cursor: ScopeCursor,
    pub package: &'t str,
    pub bindings: Vec<ImportBinding>,
    pub live: HashMap<(ScopeId, String), usize>,
}

impl<'t> Env<'t> {
    pub fn new(tree: &'t ScopeTree, package: &'t str) -> Self {
        Env {
            tree,
            cursor: ScopeCursor::default(),
            package,
            bindings: Vec::new(),
            live: HashMap::new(),
        }
    }

    pub fn is_global(&self, name: &str) -> bool {
        self.cursor.resolve(self.tree, name).is_none()
    }

    /// `require('<literal>')` with an unshadowed `require`: the specifier.
    pub fn require_specifier<'c>(&self, call: &'c CallExpression<'_>) -> Option<RequireArg<'c>> {
        let Expression::Identifier(callee) = call.callee.without_parentheses() else {
            return None;
        };
        if callee.name.as_str() != "require" || !self.is_global("require") {
            return None;
        }
        match call.arguments.first() {
            Some(arg) if call.arguments.len() == 1 => match arg {
                Argument::SpreadElement(_) => Some(RequireArg::Computed),
                _ => match literal_string(arg.to_expression()) {
                    Some(spec) => Some(RequireArg::Literal(spec)),
                    None => Some(RequireArg::Computed),
                },
            },
            _ => Some(RequireArg::Computed),
        }
    }

    /// Export path of `require('<package>[/sub]')`.
    pub fn require_target(&self, call: &CallExpression<'_>) -> Option<ExportPath> {
        match self.require_specifier(call)? {
            RequireArg::Literal(spec) => match match_specifier(self.package, spec) {
                SpecifierMatch::Path(path) => Some(path),
                _ => None,
            },
            RequireArg::Computed => None,
        }
    }

    pub fn resolve_identifier(&self, name: &str) -> Option<Resolved> {
        let scope = self.cursor.resolve(self.tree, name)?;
        let &index = self.live.get(&(scope, name.to_string()))?;
        let binding = &self.bindings[index];
        Some(Resolved {
            path: binding.path.clone(),
            namespace: binding.namespace_object,
            via: Some(index),
            require_at: None,
        })
    }

    pub fn resolve_expr(&self, expr: &Expression<'_>) -> Option<Resolved> {
        match expr.without_parentheses() {
            Expression::Identifier(id) => self.resolve_identifier(id.name.as_str()),
            Expression::StaticMemberExpression(m) => {
                self.resolve_expr(&m.object).map(|r| r.member(m.property.name.as_str()))
            }
            Expression::ComputedMemberExpression(m) => {
                let key = static_key(&m.expression)?;
                self.resolve_expr(&m.object).map(|r| r.member(&key))
            }
            Expression::CallExpression(call) => self.require_target(call).map(|path| Resolved {
                path,
                namespace: false,
                via: None,
                require_at: Some(call.span.start),
            }),
            Expression::ChainExpression(chain) => match &chain.expression {
                ChainElement::CallExpression(_) | ChainElement::TSNonNullExpression(_) => None,
                element => self.resolve_member(element.as_member_expression()?),
            },
            _ => None,
        }
    }

    pub fn resolve_member(&self, member: &MemberExpression<'_>) -> Option<Resolved> {
        match member {
            MemberExpression::StaticMemberExpression(m) => {
                self.resolve_expr(&m.object).map(|r| r.member(m.property.name.as_str()))
            }
            MemberExpression::ComputedMemberExpression(m) => {
                let key = static_key(&m.expression)?;
                self.resolve_expr(&m.object).map(|r| r.member(&key))
            }
            MemberExpression::PrivateFieldExpression(_) => None,
        }
    }
}

pub(crate) enum RequireArg<'c> {
    Literal(&'c str),
    Computed,
}
