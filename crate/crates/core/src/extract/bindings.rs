//! Second pass: local names bound to the package's exports.

use std::cell::Cell;
use std::collections::HashSet;

use oxc_ast::ast::{
    AssignmentTargetPropertyIdentifier, BindingPattern, CallExpression, ExportAllDeclaration, ExportFromDeclaration,
    ImportDeclaration, ImportDeclarationSpecifier, ImportExpression, ImportOrExportKind, ModuleExportName,
    PropertyKey, SimpleAssignmentTarget, VariableDeclarator, WithStatement,
};
use oxc_ast_visit::{walk, Visit};
use oxc_syntax::scope::ScopeFlags;

use super::resolve::{literal_string, match_specifier, static_key, Env, RequireArg, Resolved, SpecifierMatch};
use super::scope::ScopeId;
use super::{BindingKind, FileBindings, ImportBinding, ParsedModule, Warning};

pub(crate) fn collect<'m>(module: &'m ParsedModule<'_>, package: &'m str) -> FileBindings {
    let mut pass = BindingPass {
        module,
        env: Env::new(&module.scopes, package),
        consumed_requires: HashSet::new(),
        mutated: HashSet::new(),
        derived_from: Vec::new(),
        import_sites: 0,
        warnings: Vec::new(),
    };
    pass.visit_program(&module.program);
    pass.finish()
}

struct BindingPass<'m, 'a> {
    module: &'m ParsedModule<'a>,
    env: Env<'m>,
    consumed_requires: HashSet<u32>,
    mutated: HashSet<(ScopeId, String)>,
    derived_from: Vec<Option<usize>>,
    import_sites: usize,
    warnings: Vec<Warning>,
}

impl BindingPass<'_, '_> {
    fn warn(&mut self, offset: u32, message: String) {
        self.warnings.push(self.module.warning(offset, message));
    }

    fn add_binding(&mut self, name: &str, offset: u32, resolved: &Resolved, kind: BindingKind) {
        let Some(scope) = self.env.cursor.resolve(self.env.tree, name) else {
            return;
        };
        let (line, _) = self.module.line_col(offset);
        let index = self.env.bindings.len();
        self.env.bindings.push(ImportBinding {
            local_name: name.to_string(),
            package: self.env.package.to_string(),
            path: resolved.path.clone(),
            kind,
            declaring_scope: scope,
            file: self.module.path.clone(),
            line,
            namespace_object: resolved.namespace,
        });
        self.derived_from.push(resolved.via);
        self.env.live.insert((scope, name.to_string()), index);
    }

    fn bind_pattern(&mut self, pattern: &BindingPattern<'_>, resolved: &Resolved, kind: BindingKind) {
        match pattern {
            BindingPattern::BindingIdentifier(id) => self.add_binding(id.name.as_str(), id.span.start, resolved, kind),
            BindingPattern::AssignmentPattern(p) => self.bind_pattern(&p.left, resolved, kind),
            BindingPattern::ObjectPattern(object) => {
                for prop in &object.properties {
                    let key = match &prop.key {
                        PropertyKey::StaticIdentifier(id) if !prop.computed => Some(id.name.as_str().to_string()),
                        PropertyKey::PrivateIdentifier(_) => None,
                        key => key.as_expression().and_then(static_key),
                    };
                    match key {
                        Some(key) => self.bind_pattern(&prop.value, &resolved.member(&key), kind),
                        None => self.warn(
                            prop.span.start,
                            "destructuring with a computed key is not resolved".to_string(),
                        ),
                    }
                }
                if let Some(rest) = &object.rest {
                    self.warn(rest.span.start, "rest element in destructuring is not tracked".to_string());
                }
            }
            BindingPattern::ArrayPattern(array) => {
                self.warn(array.span.start, "array destructuring of a package export is not tracked".to_string());
            }
        }
    }

    fn finish(self) -> FileBindings {
        let BindingPass {
            module,
            env,
            mutated,
            derived_from,
            import_sites,
            mut warnings,
            ..
        } = self;
        let mut dropped = vec![false; env.bindings.len()];
        for (i, binding) in env.bindings.iter().enumerate() {
            let key = (binding.declaring_scope, binding.local_name.clone());
            let reason = if mutated.contains(&key) {
                Some("is reassigned")
            } else if env.tree.declaration_count(binding.declaring_scope, &binding.local_name) > 1 {
                Some("is declared more than once")
            } else if derived_from[i].is_some_and(|d| dropped[d]) {
                Some("aliases an untracked binding")
            } else {
                None
            };
            if let Some(reason) = reason {
                dropped[i] = true;
                warnings.push(Warning {
                    file: module.path.clone(),
                    line: binding.line,
                    column: 1,
                    message: format!("`{}` {reason}; calls through it are not tracked", binding.local_name),
                });
            }
        }
        let bindings = env
            .bindings
            .into_iter()
            .zip(dropped)
            .filter_map(|(b, d)| (!d).then_some(b))
            .collect();
        FileBindings {
            bindings,
            import_sites,
            warnings,
        }
    }
}

impl<'a> Visit<'a> for BindingPass<'_, 'a> {
    fn enter_scope(&mut self, _flags: ScopeFlags, _scope_id: &Cell<Option<oxc_syntax::scope::ScopeId>>) {
        self.env.cursor.enter();
    }

    fn leave_scope(&mut self) {
        self.env.cursor.leave();
    }

    fn visit_variable_declarator(&mut self, it: &VariableDeclarator<'a>) {
        if let Some(init) = &it.init {
            if let Some(resolved) = self.env.resolve_expr(init) {
                let kind = match resolved.require_at {
                    Some(at) => {
                        self.consumed_requires.insert(at);
                        self.import_sites += 1;
                        BindingKind::CjsRequire
                    }
                    None => BindingKind::Alias,
                };
                self.bind_pattern(&it.id, &resolved, kind);
            }
        }
        walk::walk_variable_declarator(self, it);
    }

    fn visit_import_declaration(&mut self, it: &ImportDeclaration<'a>) {
        if it.import_kind == ImportOrExportKind::Type {
            return;
        }
        let spec = it.source.value.as_str();
        let base = match match_specifier(self.env.package, spec) {
            SpecifierMatch::NotThisPackage => return walk::walk_import_declaration(self, it),
            SpecifierMatch::Unrepresentable => {
                self.import_sites += 1;
                self.warn(it.span.start, format!("import of `{spec}` has no representable export path"));
                return walk::walk_import_declaration(self, it);
            }
            SpecifierMatch::Path(path) => path,
        };
        self.import_sites += 1;
        let root = Resolved {
            path: base,
            namespace: false,
            via: None,
            require_at: None,
        };
        for specifier in it.specifiers.iter().flatten() {
            match specifier {
                ImportDeclarationSpecifier::ImportSpecifier(s) => {
                    let imported = match &s.imported {
                        ModuleExportName::IdentifierName(n) => n.name.as_str(),
                        ModuleExportName::IdentifierReference(n) => n.name.as_str(),
                        ModuleExportName::StringLiteral(l) => l.value.as_str(),
                    };
                    let (resolved, kind) = if imported == "default" {
                        (root.clone(), BindingKind::EsmDefault)
                    } else {
                        (root.member(imported), BindingKind::EsmNamed)
                    };
                    self.add_binding(s.local.name.as_str(), s.local.span.start, &resolved, kind);
                }
                ImportDeclarationSpecifier::ImportDefaultSpecifier(s) => {
                    self.add_binding(s.local.name.as_str(), s.local.span.start, &root, BindingKind::EsmDefault);
                }
                ImportDeclarationSpecifier::ImportNamespaceSpecifier(s) => {
                    let resolved = Resolved {
                        namespace: true,
                        ..root.clone()
                    };
                    self.add_binding(s.local.name.as_str(), s.local.span.start, &resolved, BindingKind::EsmNamespace);
                }
            }
        }
        walk::walk_import_declaration(self, it);
    }

    fn visit_call_expression(&mut self, it: &CallExpression<'a>) {
        match self.env.require_specifier(it) {
            Some(RequireArg::Literal(spec)) => match match_specifier(self.env.package, spec) {
                SpecifierMatch::NotThisPackage => {}
                SpecifierMatch::Path(_) => {
                    if !self.consumed_requires.contains(&it.span.start) {
                        self.import_sites += 1;
                    }
                }
                SpecifierMatch::Unrepresentable => {
                    self.import_sites += 1;
                    self.warn(it.span.start, format!("require of `{spec}` has no representable export path"));
                }
            },
            Some(RequireArg::Computed) => {
                self.warn(it.span.start, "require with a computed specifier is not analyzed".to_string());
            }
            None => {}
        }
        if let oxc_ast::ast::Expression::Identifier(callee) = it.callee.without_parentheses() {
            if callee.name.as_str() == "eval" && self.env.is_global("eval") {
                self.warn(it.span.start, "eval is not analyzed".to_string());
            }
        }
        walk::walk_call_expression(self, it);
    }

    fn visit_import_expression(&mut self, it: &ImportExpression<'a>) {
        match literal_string(&it.source) {
            Some(spec) => {
                if !matches!(match_specifier(self.env.package, spec), SpecifierMatch::NotThisPackage) {
                    self.import_sites += 1;
                    self.warn(it.span.start, format!("dynamic import of `{spec}` is not analyzed"));
                }
            }
            None => self.warn(it.span.start, "dynamic import with a computed specifier is not analyzed".to_string()),
        }
        walk::walk_import_expression(self, it);
    }

    fn visit_export_all_declaration(&mut self, it: &ExportAllDeclaration<'a>) {
        self.note_reexport(it.source.value.as_str(), it.span.start);
        walk::walk_export_all_declaration(self, it);
    }

    fn visit_export_from_declaration(&mut self, it: &ExportFromDeclaration<'a>) {
        self.note_reexport(it.source.value.as_str(), it.span.start);
        walk::walk_export_from_declaration(self, it);
    }

    fn visit_with_statement(&mut self, it: &WithStatement<'a>) {
        self.warn(it.span.start, "`with` statement makes name resolution unreliable".to_string());
        walk::walk_with_statement(self, it);
    }

    fn visit_simple_assignment_target(&mut self, it: &SimpleAssignmentTarget<'a>) {
        if let SimpleAssignmentTarget::AssignmentTargetIdentifier(id) = it {
            self.note_write(id.name.as_str());
        }
        walk::walk_simple_assignment_target(self, it);
    }

    fn visit_assignment_target_property_identifier(&mut self, it: &AssignmentTargetPropertyIdentifier<'a>) {
        self.note_write(it.binding.name.as_str());
        walk::walk_assignment_target_property_identifier(self, it);
    }
}

impl BindingPass<'_, '_> {
    fn note_write(&mut self, name: &str) {
        if let Some(scope) = self.env.cursor.resolve(self.env.tree, name) {
            self.mutated.insert((scope, name.to_string()));
        }
    }

    fn note_reexport(&mut self, spec: &str, offset: u32) {
        if !matches!(match_specifier(self.env.package, spec), SpecifierMatch::NotThisPackage) {
            self.import_sites += 1;
            self.warn(offset, format!("re-export of `{spec}` is not followed across files"));
        }
    }
}
