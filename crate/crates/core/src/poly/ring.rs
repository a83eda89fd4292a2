use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::Monomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolKind {
    State,
    Parameter,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub name: String,
    pub kind: SymbolKind,
}

impl Symbol {
    pub fn state(name: impl Into<String>) -> Self {
        Symbol { name: name.into(), kind: SymbolKind::State }
    }

    pub fn parameter(name: impl Into<String>) -> Self {
        Symbol { name: name.into(), kind: SymbolKind::Parameter }
    }
}

/// Ordering used inside a block of variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum OrderKind {
    #[default]
    Lex,
    DegLex,
    DegRevLex,
}

/// A monomial order over the symbols of a [`Ring`], in symbol precedence
/// order (index 0 is the largest variable).
///
/// The first `block` symbols are compared lexicographically before anything
/// else; the remaining symbols are compared with `kind`. With `block == 0`
/// this is a plain lex / deglex / degrevlex order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    pub block: usize,
}

impl MonomialOrder {
    pub fn lex() -> Self {
        MonomialOrder { kind: OrderKind::Lex, block: 0 }
    }

    pub fn new(kind: OrderKind) -> Self {
        MonomialOrder { kind, block: 0 }
    }

    /// Parameters (the leading `params` symbols) compared lex first, then
    /// `kind` on the state variables.
    pub fn block_elimination(params: usize, kind: OrderKind) -> Self {
        MonomialOrder { kind, block: params }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (a, b) = (a.exponents(), b.exponents());
        debug_assert_eq!(a.len(), b.len());
        let split = self.block.min(a.len());
        for i in 0..split {
            match a[i].cmp(&b[i]) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        let (ra, rb) = (&a[split..], &b[split..]);
        match self.kind {
            OrderKind::Lex => ra.cmp(rb),
            OrderKind::DegLex => {
                let da: u32 = ra.iter().sum();
                let db: u32 = rb.iter().sum();
                da.cmp(&db).then_with(|| ra.cmp(rb))
            }
            OrderKind::DegRevLex => {
                let da: u32 = ra.iter().sum();
                let db: u32 = rb.iter().sum();
                da.cmp(&db).then_with(|| {
                    for (x, y) in ra.iter().rev().zip(rb.iter().rev()) {
                        if x != y {
                            return y.cmp(x);
                        }
                    }
                    Ordering::Equal
                })
            }
        }
    }
}

/// Symbol universe plus the active monomial order. Immutable once built;
/// adding ghost variables means building a new ring.
#[derive(Debug, Clone)]
pub struct Ring {
    symbols: Vec<Symbol>,
    index: HashMap<String, usize>,
    order: MonomialOrder,
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols && self.order == other.order
    }
}

impl Eq for Ring {}

impl Ring {
    pub fn new(symbols: Vec<Symbol>, order: MonomialOrder) -> Result<Arc<Ring>> {
        let mut index = HashMap::with_capacity(symbols.len());
        for (i, s) in symbols.iter().enumerate() {
            if index.insert(s.name.clone(), i).is_some() {
                return Err(Error::DuplicateSymbol(s.name.clone()));
            }
        }
        if order.block > symbols.len() {
            return Err(Error::InvalidOrder(format!(
                "elimination block of {} exceeds {} symbols",
                order.block,
                symbols.len()
            )));
        }
        // A parameter sitting below a state variable would break the
        // elimination property the template machinery relies on.
        if order.block > 0 {
            let params = symbols.iter().filter(|s| s.kind == SymbolKind::Parameter).count();
            let block_ok = symbols[..order.block].iter().all(|s| s.kind == SymbolKind::Parameter);
            if !block_ok || params != order.block {
                return Err(Error::InvalidOrder(
                    "the elimination block must hold exactly the parameters".into(),
                ));
            }
        }
        Ok(Arc::new(Ring { symbols, index, order }))
    }

    /// Ring over state variables only.
    pub fn state<S: AsRef<str>>(names: &[S], kind: OrderKind) -> Result<Arc<Ring>> {
        let symbols = names.iter().map(|n| Symbol::state(n.as_ref())).collect();
        Ring::new(symbols, MonomialOrder::new(kind))
    }

    /// Ring over `params` followed by this ring's state variables, with a
    /// block-elimination order putting every parameter above every state
    /// variable.
    pub fn with_parameters<S: AsRef<str>>(&self, params: &[S]) -> Result<Arc<Ring>> {
        let mut symbols: Vec<Symbol> = params.iter().map(|p| Symbol::parameter(p.as_ref())).collect();
        symbols.extend(self.symbols.iter().filter(|s| s.kind == SymbolKind::State).cloned());
        Ring::new(symbols, MonomialOrder::block_elimination(params.len(), self.order.kind))
    }

    /// The state-variable sub-ring, keeping the state-block order.
    pub fn without_parameters(&self) -> Result<Arc<Ring>> {
        let symbols = self.symbols.iter().filter(|s| s.kind == SymbolKind::State).cloned().collect();
        Ring::new(symbols, MonomialOrder::new(self.order.kind))
    }

    /// Same symbols, different order.
    pub fn with_order(&self, order: MonomialOrder) -> Result<Arc<Ring>> {
        Ring::new(self.symbols.clone(), order)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn symbol(&self, i: usize) -> &Symbol {
        &self.symbols[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn parameter_count(&self) -> usize {
        self.symbols.iter().filter(|s| s.kind == SymbolKind::Parameter).count()
    }

    pub fn is_parameter(&self, i: usize) -> bool {
        self.symbols[i].kind == SymbolKind::Parameter
    }

    /// True when the order eliminates all parameters of this ring.
    pub fn is_elimination_order(&self) -> bool {
        let params = self.parameter_count();
        params == 0 || (self.order.kind == OrderKind::Lex && self.symbols[..params].iter().all(|s| s.kind == SymbolKind::Parameter))
            || (self.order.block == params)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.symbols.iter().map(|s| s.name.as_str())
    }
}

pub(crate) fn same_ring(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}
