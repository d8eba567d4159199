//! Lexical scope tree.
//!
//! Every pass over a file enters scopes in the same order (the AST visitor's
//! `enter_scope` sequence), so the n-th scope entered in a later pass is
//! scope `n` of the tree built here.

use std::cell::Cell;
use std::collections::HashMap;

use oxc_ast::ast::{ArrowFunctionExpression, BindingIdentifier, Class, Function, Program, VariableDeclaration, VariableDeclarationKind};
use oxc_ast_visit::{walk, Visit};
use oxc_syntax::scope::ScopeFlags;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ScopeId(pub u32);

#[derive(Debug, Clone, Default)]
struct ScopeInfo {
    hoists_var: bool,
    /// Declared names and how many declarations each has in this scope.
    names: HashMap<String, u32>,
}

#[derive(Debug, Clone, Default)]
pub struct ScopeTree {
    scopes: Vec<ScopeInfo>,
}

impl ScopeTree {
    pub fn build(program: &Program<'_>) -> Self {
        let mut collector = Collector::default();
        collector.visit_program(program);
        collector.tree
    }

    pub fn declares(&self, scope: ScopeId, name: &str) -> bool {
        self.scopes[scope.0 as usize].names.contains_key(name)
    }

    /// Number of declarations of `name` in `scope`.
    pub fn declaration_count(&self, scope: ScopeId, name: &str) -> u32 {
        self.scopes[scope.0 as usize].names.get(name).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.scopes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scopes.is_empty()
    }
}

/// Replays scope entry during a later pass and resolves identifiers
/// against the tree.
#[derive(Debug, Default)]
pub struct ScopeCursor {
    next: u32,
    stack: Vec<ScopeId>,
}

impl ScopeCursor {
    pub fn enter(&mut self) {
        self.stack.push(ScopeId(self.next));
        self.next += 1;
    }

    pub fn leave(&mut self) {
        self.stack.pop();
    }

    /// Innermost scope declaring `name`; `None` for globals.
    pub fn resolve(&self, tree: &ScopeTree, name: &str) -> Option<ScopeId> {
        self.stack.iter().rev().copied().find(|&s| tree.declares(s, name))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum DeclTarget {
    Current,
    NearestVarScope,
}

#[derive(Default)]
struct Collector {
    tree: ScopeTree,
    stack: Vec<ScopeId>,
    targets: Vec<DeclTarget>,
}

impl Collector {
    fn declare_in(&mut self, scope: ScopeId, name: &str) {
        *self.tree.scopes[scope.0 as usize].names.entry(name.to_string()).or_default() += 1;
    }

    fn current(&self) -> Option<ScopeId> {
        self.stack.last().copied()
    }

    fn nearest_var_scope(&self) -> Option<ScopeId> {
        self.stack
            .iter()
            .rev()
            .copied()
            .find(|s| self.tree.scopes[s.0 as usize].hoists_var)
    }

    fn with_target(&mut self, target: DeclTarget, f: impl FnOnce(&mut Self)) {
        self.targets.push(target);
        f(self);
        self.targets.pop();
    }
}

impl<'a> Visit<'a> for Collector {
    fn enter_scope(&mut self, flags: ScopeFlags, _scope_id: &Cell<Option<oxc_syntax::scope::ScopeId>>) {
        let id = ScopeId(self.tree.scopes.len() as u32);
        self.tree.scopes.push(ScopeInfo {
            hoists_var: flags.intersects(ScopeFlags::Var),
            names: HashMap::new(),
        });
        self.stack.push(id);
    }

    fn leave_scope(&mut self) {
        self.stack.pop();
    }

    fn visit_variable_declaration(&mut self, it: &VariableDeclaration<'a>) {
        let target = match it.kind {
            VariableDeclarationKind::Var => DeclTarget::NearestVarScope,
            _ => DeclTarget::Current,
        };
        self.with_target(target, |this| walk::walk_variable_declaration(this, it));
    }

    fn visit_function(&mut self, it: &Function<'a>, flags: ScopeFlags) {
        // A declaration's name binds in the enclosing scope; the walk below
        // also records it inside the function's own scope, which is harmless.
        if it.is_declaration() {
            if let (Some(id), Some(scope)) = (&it.id, self.current()) {
                self.declare_in(scope, id.name.as_str());
            }
        }
        self.with_target(DeclTarget::Current, |this| walk::walk_function(this, it, flags));
    }

    fn visit_arrow_function_expression(&mut self, it: &ArrowFunctionExpression<'a>) {
        self.with_target(DeclTarget::Current, |this| walk::walk_arrow_function_expression(this, it));
    }

    fn visit_class(&mut self, it: &Class<'a>) {
        self.with_target(DeclTarget::Current, |this| walk::walk_class(this, it));
    }

    fn visit_binding_identifier(&mut self, it: &BindingIdentifier<'a>) {
        let scope = match self.targets.last().copied().unwrap_or(DeclTarget::Current) {
            DeclTarget::Current => self.current(),
            DeclTarget::NearestVarScope => self.nearest_var_scope(),
        };
        if let Some(scope) = scope {
            self.declare_in(scope, it.name.as_str());
        }
    }
}
