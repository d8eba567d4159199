//! Third pass: call expressions whose callee resolves to an advisory symbol.

use std::cell::Cell;

use oxc_ast::ast::{Argument, AssignmentExpression, CallExpression, Expression, MemberExpression};
use oxc_ast_visit::{walk, Visit};
use oxc_span::GetSpan;
use oxc_syntax::scope::ScopeFlags;

use super::resolve::{static_key, Env};
use super::{CallSite, FileBindings, ParsedModule, Warning};
use crate::advisory::{Advisory, ExportPath};

pub(crate) fn collect(module: &ParsedModule<'_>, bindings: &FileBindings, advisory: &Advisory) -> (Vec<CallSite>, Vec<Warning>) {
    let mut env = Env::new(&module.scopes, &advisory.package);
    for (index, binding) in bindings.bindings.iter().enumerate() {
        env.live.insert((binding.declaring_scope, binding.local_name.clone()), index);
    }
    env.bindings = bindings.bindings.clone();
    let mut pass = CallPass {
        module,
        env,
        symbols: &advisory.symbols,
        calls: Vec::new(),
        warnings: Vec::new(),
    };
    pass.visit_program(&module.program);
    (pass.calls, pass.warnings)
}

struct CallPass<'m, 'a> {
    module: &'m ParsedModule<'a>,
    env: Env<'m>,
    symbols: &'m [ExportPath],
    calls: Vec<CallSite>,
    warnings: Vec<Warning>,
}

impl CallPass<'_, '_> {
    /// The path is a symbol or could still reach one through member access.
    fn leads_to_symbol(&self, path: &ExportPath) -> bool {
        self.symbols.iter().any(|s| s.segments().starts_with(path.segments()))
    }

    fn warn(&mut self, offset: u32, message: String) {
        self.warnings.push(self.module.warning(offset, message));
    }

    fn check_computed(&mut self, member: &MemberExpression<'_>) {
        if let MemberExpression::ComputedMemberExpression(m) = member {
            if static_key(&m.expression).is_none() {
                if let Some(object) = self.env.resolve_expr(&m.object) {
                    if self.leads_to_symbol(&object.path) {
                        self.warn(m.span.start, format!("computed access on `{}` is not resolved", object.path));
                    }
                }
            }
        }
    }

    fn check_escape(&mut self, expr: &Expression<'_>, what: &str) {
        if let Some(resolved) = self.env.resolve_expr(expr) {
            if self.leads_to_symbol(&resolved.path) {
                self.warn(expr.span().start, format!("`{}` {what}; later calls through it are not followed", resolved.path));
            }
        }
    }
}

impl<'a> Visit<'a> for CallPass<'_, 'a> {
    fn enter_scope(&mut self, _flags: ScopeFlags, _scope_id: &Cell<Option<oxc_syntax::scope::ScopeId>>) {
        self.env.cursor.enter();
    }

    fn leave_scope(&mut self) {
        self.env.cursor.leave();
    }

    fn visit_call_expression(&mut self, it: &CallExpression<'a>) {
        let callee = it.callee.without_parentheses();
        if let Some(resolved) = self.env.resolve_expr(callee) {
            if !resolved.namespace {
                if let Some(symbol) = self.symbols.iter().find(|s| **s == resolved.path) {
                    let span = callee.span();
                    let (line, column) = self.module.line_col(span.start);
                    self.calls.push(CallSite {
                        file: self.module.path.clone(),
                        line,
                        column,
                        resolved_path: resolved.path.clone(),
                        matched_symbol: symbol.clone(),
                        snippet: self.module.source[span.start as usize..span.end as usize].to_string(),
                    });
                }
            }
        }
        for arg in &it.arguments {
            if let Argument::SpreadElement(spread) = arg {
                self.check_escape(&spread.argument, "is spread into a call");
            } else {
                self.check_escape(arg.to_expression(), "is passed as an argument");
            }
        }
        walk::walk_call_expression(self, it);
    }

    fn visit_member_expression(&mut self, it: &MemberExpression<'a>) {
        self.check_computed(it);
        walk::walk_member_expression(self, it);
    }

    fn visit_assignment_expression(&mut self, it: &AssignmentExpression<'a>) {
        if it.left.is_member_expression() {
            self.check_escape(&it.right, "is stored in an object property");
        }
        walk::walk_assignment_expression(self, it);
    }
}
