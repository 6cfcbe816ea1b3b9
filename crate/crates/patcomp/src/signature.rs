//! Many-sorted signatures: constructors, defined symbols, and the tuple
//! symbols that package the arguments of a defined symbol.
//!
//! A [`Signature`] owns the sort and symbol tables every other module works
//! against. Symbols are referenced by [`SymbolId`]; tuple symbols are
//! structural (one per arity) and need no registration.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Index of a sort in its signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SortId(pub u32);

/// A symbol reference: either a declared symbol or the structural tuple
/// symbol of a given arity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolId {
    Decl(u32),
    Tuple(u32),
}

impl SymbolId {
    pub fn is_tuple(&self) -> bool {
        matches!(self, SymbolId::Tuple(_))
    }
}

/// What a declared symbol is used for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    Constructor,
    Defined,
}

#[derive(Debug, Clone)]
struct SymbolDecl {
    name: String,
    kind: SymbolKind,
    arg_sorts: Vec<SortId>,
    result_sort: SortId,
}

/// The sort of a pattern or term: a declared sort, or a tuple of declared
/// sorts for argument tuples. Tuples never nest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Shape {
    Sort(SortId),
    Tuple(Vec<SortId>),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SignatureError {
    #[error("duplicate sort name `{0}`")]
    DuplicateSort(String),
    #[error("duplicate symbol name `{0}`")]
    DuplicateSymbol(String),
    #[error("unknown sort `{0}`")]
    UnknownSort(String),
    #[error("sort `{0}` has no value of any height")]
    UninhabitedSort(String),
}

/// Sort and symbol tables. Immutable once built; all lookups are by id.
#[derive(Debug, Clone, Default)]
pub struct Signature {
    sorts: Vec<String>,
    symbols: Vec<SymbolDecl>,
    sort_ids: HashMap<String, SortId>,
    symbol_ids: HashMap<String, u32>,
}

/// Name of the implicit sort used when a signature is built without any
/// explicit sort declarations.
pub const MONO_SORT: &str = "U";

impl Signature {
    pub fn new() -> Self {
        Signature::default()
    }

    pub fn add_sort(&mut self, name: &str) -> Result<SortId, SignatureError> {
        if self.sort_ids.contains_key(name) {
            return Err(SignatureError::DuplicateSort(name.to_string()));
        }
        let id = SortId(self.sorts.len() as u32);
        self.sorts.push(name.to_string());
        self.sort_ids.insert(name.to_string(), id);
        Ok(id)
    }

    /// The implicit sort of mono-sorted signatures, declared on first use.
    pub fn mono_sort(&mut self) -> SortId {
        match self.sort_ids.get(MONO_SORT) {
            Some(&id) => id,
            None => self.add_sort(MONO_SORT).expect("fresh sort"),
        }
    }

    fn add_symbol(
        &mut self,
        name: &str,
        kind: SymbolKind,
        arg_sorts: Vec<SortId>,
        result_sort: SortId,
    ) -> Result<SymbolId, SignatureError> {
        if self.symbol_ids.contains_key(name) {
            return Err(SignatureError::DuplicateSymbol(name.to_string()));
        }
        let id = self.symbols.len() as u32;
        self.symbols.push(SymbolDecl {
            name: name.to_string(),
            kind,
            arg_sorts,
            result_sort,
        });
        self.symbol_ids.insert(name.to_string(), id);
        Ok(SymbolId::Decl(id))
    }

    pub fn add_constructor(
        &mut self,
        name: &str,
        arg_sorts: Vec<SortId>,
        result_sort: SortId,
    ) -> Result<SymbolId, SignatureError> {
        self.add_symbol(name, SymbolKind::Constructor, arg_sorts, result_sort)
    }

    pub fn add_defined(
        &mut self,
        name: &str,
        arg_sorts: Vec<SortId>,
        result_sort: SortId,
    ) -> Result<SymbolId, SignatureError> {
        self.add_symbol(name, SymbolKind::Defined, arg_sorts, result_sort)
    }

    /// Constructor on the implicit mono-sort.
    pub fn add_mono_constructor(&mut self, name: &str, arity: usize) -> Result<SymbolId, SignatureError> {
        let u = self.mono_sort();
        self.add_constructor(name, vec![u; arity], u)
    }

    /// Defined symbol on the implicit mono-sort.
    pub fn add_mono_defined(&mut self, name: &str, arity: usize) -> Result<SymbolId, SignatureError> {
        let u = self.mono_sort();
        self.add_defined(name, vec![u; arity], u)
    }

    pub fn sort_id(&self, name: &str) -> Option<SortId> {
        self.sort_ids.get(name).copied()
    }

    pub fn sort_name(&self, id: SortId) -> &str {
        &self.sorts[id.0 as usize]
    }

    pub fn sort_count(&self) -> usize {
        self.sorts.len()
    }

    pub fn sorts(&self) -> impl Iterator<Item = SortId> + '_ {
        (0..self.sorts.len() as u32).map(SortId)
    }

    pub fn symbol_id(&self, name: &str) -> Option<SymbolId> {
        self.symbol_ids.get(name).map(|&i| SymbolId::Decl(i))
    }

    pub fn symbol_name(&self, id: SymbolId) -> &str {
        match id {
            SymbolId::Decl(i) => &self.symbols[i as usize].name,
            SymbolId::Tuple(_) => "<tuple>",
        }
    }

    pub fn kind(&self, id: SymbolId) -> Option<SymbolKind> {
        match id {
            SymbolId::Decl(i) => Some(self.symbols[i as usize].kind),
            SymbolId::Tuple(_) => None,
        }
    }

    pub fn is_constructor(&self, id: SymbolId) -> bool {
        self.kind(id) == Some(SymbolKind::Constructor)
    }

    pub fn is_defined(&self, id: SymbolId) -> bool {
        self.kind(id) == Some(SymbolKind::Defined)
    }

    pub fn arity(&self, id: SymbolId) -> usize {
        match id {
            SymbolId::Decl(i) => self.symbols[i as usize].arg_sorts.len(),
            SymbolId::Tuple(n) => n as usize,
        }
    }

    /// Argument sorts of a declared symbol. Tuple symbols are
    /// sort-polymorphic and have none.
    pub fn arg_sorts(&self, id: SymbolId) -> Option<&[SortId]> {
        match id {
            SymbolId::Decl(i) => Some(&self.symbols[i as usize].arg_sorts),
            SymbolId::Tuple(_) => None,
        }
    }

    pub fn result_sort(&self, id: SymbolId) -> Option<SortId> {
        match id {
            SymbolId::Decl(i) => Some(self.symbols[i as usize].result_sort),
            SymbolId::Tuple(_) => None,
        }
    }

    /// All constructor ids in declaration order.
    pub fn constructors(&self) -> Vec<SymbolId> {
        self.symbols_of_kind(SymbolKind::Constructor)
    }

    /// All defined-symbol ids in declaration order.
    pub fn defined_symbols(&self) -> Vec<SymbolId> {
        self.symbols_of_kind(SymbolKind::Defined)
    }

    fn symbols_of_kind(&self, kind: SymbolKind) -> Vec<SymbolId> {
        self.symbols
            .iter()
            .enumerate()
            .filter(|(_, s)| s.kind == kind)
            .map(|(i, _)| SymbolId::Decl(i as u32))
            .collect()
    }

    /// Constructors whose result sort is `sort`, in declaration order.
    pub fn constructors_of_sort(&self, sort: SortId) -> Vec<SymbolId> {
        self.symbols
            .iter()
            .enumerate()
            .filter(|(_, s)| s.kind == SymbolKind::Constructor && s.result_sort == sort)
            .map(|(i, _)| SymbolId::Decl(i as u32))
            .collect()
    }

    /// True when some finite ground term of this sort exists.
    pub fn is_inhabited(&self, sort: SortId) -> bool {
        // Fixpoint over "sort has a term of finite height".
        let mut inhabited = vec![false; self.sorts.len()];
        loop {
            let mut changed = false;
            for decl in &self.symbols {
                if decl.kind != SymbolKind::Constructor {
                    continue;
                }
                if inhabited[decl.result_sort.0 as usize] {
                    continue;
                }
                if decl.arg_sorts.iter().all(|s| inhabited[s.0 as usize]) {
                    inhabited[decl.result_sort.0 as usize] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        inhabited[sort.0 as usize]
    }

    /// Load-time check: every declared sort must have a nonempty value set.
    pub fn check_inhabited(&self) -> Result<(), SignatureError> {
        for id in self.sorts() {
            if !self.is_inhabited(id) {
                return Err(SignatureError::UninhabitedSort(self.sort_name(id).to_string()));
            }
        }
        Ok(())
    }

    /// True when a name is taken by a declared sort or symbol.
    pub fn owns_name(&self, name: &str) -> bool {
        self.symbol_ids.contains_key(name) || self.sort_ids.contains_key(name)
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Sort(s) => write!(f, "#{}", s.0),
            Shape::Tuple(ss) => {
                write!(f, "<")?;
                for (i, s) in ss.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "#{}", s.0)?;
                }
                write!(f, ">")
            }
        }
    }
}
