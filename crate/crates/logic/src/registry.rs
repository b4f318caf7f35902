use crate::scalar::{clip, Lattice};
use crate::LogicError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomId(pub usize);

#[derive(Clone, Debug, PartialEq)]
pub struct AtomEntry<T> {
    pub name: String,
    pub values: Vec<T>,
}

/// Named, bounded state functions over a finite state space.
///
/// Every function is stored as a table indexed by state and clipped into
/// `[-bound, bound]` on registration.
#[derive(Clone, Debug, PartialEq)]
pub struct Registry<T> {
    bound: T,
    states: usize,
    atoms: Vec<AtomEntry<T>>,
}

impl<T: Lattice> Registry<T> {
    pub fn new(states: usize, bound: T) -> Self {
        Registry { bound, states, atoms: Vec::new() }
    }

    pub fn register(&mut self, name: &str, values: Vec<T>) -> Result<AtomId, LogicError> {
        if self.id(name).is_some() {
            return Err(LogicError::DuplicateAtom(name.to_string()));
        }
        if values.len() != self.states {
            return Err(LogicError::TableLength {
                name: name.to_string(),
                expected: self.states,
                got: values.len(),
            });
        }
        let clipped: Vec<T> = values.iter().map(|&v| clip(v, self.bound)).collect();
        if clipped != values {
            log::warn!("atom `{name}` exceeds the bound and was clipped");
        }
        self.atoms.push(AtomEntry { name: name.to_string(), values: clipped });
        Ok(AtomId(self.atoms.len() - 1))
    }

    /// Builder-style [`register`](Self::register).
    pub fn with(mut self, name: &str, values: Vec<T>) -> Result<Self, LogicError> {
        self.register(name, values)?;
        Ok(self)
    }

    pub fn bound(&self) -> T {
        self.bound
    }
    pub fn top(&self) -> T {
        self.bound
    }
    pub fn bottom(&self) -> T {
        self.bound.negate()
    }
    pub fn state_count(&self) -> usize {
        self.states
    }
    pub fn len(&self) -> usize {
        self.atoms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn id(&self, name: &str) -> Option<AtomId> {
        self.atoms.iter().position(|a| a.name == name).map(AtomId)
    }

    pub fn resolve(&self, name: &str) -> Result<AtomId, LogicError> {
        self.id(name).ok_or_else(|| LogicError::UnknownAtom(name.to_string()))
    }

    pub fn name(&self, id: AtomId) -> &str {
        &self.atoms[id.0].name
    }

    #[inline]
    pub fn value(&self, id: AtomId, state: usize) -> T {
        self.atoms[id.0].values[state]
    }

    pub fn table(&self, id: AtomId) -> &[T] {
        &self.atoms[id.0].values
    }

    pub fn entries(&self) -> impl Iterator<Item = &AtomEntry<T>> {
        self.atoms.iter()
    }

    /// Registry over the same names with every table mapped through `f`.
    pub fn map<U: Lattice>(&self, bound: U, mut f: impl FnMut(T) -> U) -> Registry<U> {
        Registry {
            bound,
            states: self.states,
            atoms: self
                .atoms
                .iter()
                .map(|a| AtomEntry { name: a.name.clone(), values: a.values.iter().map(|&v| f(v)).collect() })
                .collect(),
        }
    }
}
