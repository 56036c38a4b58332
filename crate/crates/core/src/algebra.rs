//! Finite Boolean algebras as powersets of atoms.
//!
//! An algebra with `n` atoms has `2^n` elements. Element `x` is stored as a
//! bitmask in which bit `i` is set exactly when atom `i` lies below `x`
//! (little-endian: atom 0 is the least significant bit). `⊥` is `0` and `⊤`
//! is `2^n - 1`.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported number of atoms.
pub const MAX_ATOMS: usize = 16;

/// Index of an atom (possible world), in `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AtomIndex(pub usize);

impl AtomIndex {
    pub fn index(self) -> usize {
        self.0
    }

    /// The singleton event `{α}`.
    pub fn event(self) -> Event {
        Event(1 << self.0)
    }
}

impl fmt::Display for AtomIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "α{}", self.0 + 1)
    }
}

/// An element of a finite Boolean algebra, as a set of atoms.
///
/// Events carry no reference to their algebra; operations that depend on the
/// atom count (complement, implication, validity) live on [`Algebra`].
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
pub struct Event(pub u32);

impl Event {
    pub const BOTTOM: Event = Event(0);

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn meet(self, other: Event) -> Event {
        Event(self.0 & other.0)
    }

    pub fn join(self, other: Event) -> Event {
        Event(self.0 | other.0)
    }

    /// Lattice order: `self ⊆ other`.
    pub fn leq(self, other: Event) -> bool {
        self.0 & other.0 == self.0
    }

    pub fn contains(self, atom: AtomIndex) -> bool {
        self.0 >> atom.0 & 1 == 1
    }

    pub fn is_bottom(self) -> bool {
        self.0 == 0
    }

    /// Number of atoms below the event.
    pub fn cardinality(self) -> u32 {
        self.0.count_ones()
    }

    /// Atoms below the event, ascending.
    pub fn atoms(self) -> Atoms {
        Atoms(self.0)
    }

    /// Smallest atom below the event, if any.
    pub fn least_atom(self) -> Option<AtomIndex> {
        (self.0 != 0).then(|| AtomIndex(self.0.trailing_zeros() as usize))
    }

    /// All sub-events of `self`, ascending by bits (includes `⊥` and `self`).
    pub fn subevents(self) -> impl Iterator<Item = Event> {
        let mask = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == mask {
                None
            } else {
                // Next submask in ascending order.
                Some(((cur | !mask).wrapping_add(1)) & mask)
            };
            Some(Event(cur))
        })
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return f.write_str("⊥");
        }
        f.write_str("{")?;
        for (i, atom) in self.atoms().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{atom}")?;
        }
        f.write_str("}")
    }
}

/// Iterator over the atoms of an event.
#[derive(Debug, Clone)]
pub struct Atoms(u32);

impl Iterator for Atoms {
    type Item = AtomIndex;

    fn next(&mut self) -> Option<AtomIndex> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(AtomIndex(i as usize))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Atoms {}

/// Result of applying every binary connective to a pair of events.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Connectives {
    pub meet: Event,
    pub join: Event,
    pub complement_x: Event,
    pub implication: Event,
}

/// A finite Boolean algebra with named atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Algebra {
    names: Vec<String>,
}

impl Algebra {
    /// Algebra with atoms named `w1 … wn`.
    pub fn new(atom_count: usize) -> Result<Self> {
        Self::with_names((1..=atom_count).map(|i| format!("w{i}")).collect())
    }

    pub fn with_names(names: Vec<String>) -> Result<Self> {
        if names.is_empty() || names.len() > MAX_ATOMS {
            return Err(Error::AtomCount(names.len()));
        }
        let mut seen = HashSet::new();
        for name in &names {
            if name.is_empty() || !seen.insert(name.as_str()) {
                return Err(Error::AtomNames(name.clone()));
            }
        }
        Ok(Self { names })
    }

    pub fn atom_count(&self) -> usize {
        self.names.len()
    }

    pub fn atom_names(&self) -> &[String] {
        &self.names
    }

    pub fn atom_name(&self, atom: AtomIndex) -> &str {
        &self.names[atom.0]
    }

    pub fn atom_by_name(&self, name: &str) -> Option<AtomIndex> {
        self.names.iter().position(|n| n == name).map(AtomIndex)
    }

    /// Number of elements, `2^n`.
    pub fn size(&self) -> usize {
        1 << self.names.len()
    }

    pub fn bottom(&self) -> Event {
        Event::BOTTOM
    }

    pub fn top(&self) -> Event {
        Event(((1u64 << self.names.len()) - 1) as u32)
    }

    pub fn event(&self, bits: u32) -> Result<Event> {
        if u64::from(bits) >= 1u64 << self.names.len() {
            return Err(Error::InvalidEvent {
                bits,
                atoms: self.names.len(),
            });
        }
        Ok(Event(bits))
    }

    pub fn atom(&self, index: usize) -> Result<AtomIndex> {
        if index >= self.names.len() {
            return Err(Error::InvalidAtom {
                index,
                atoms: self.names.len(),
            });
        }
        Ok(AtomIndex(index))
    }

    pub fn check(&self, x: Event) -> Result<Event> {
        self.event(x.0)
    }

    pub fn contains_event(&self, x: Event) -> bool {
        x.leq(self.top())
    }

    /// Event built from a list of atom indices.
    pub fn event_of(&self, atoms: impl IntoIterator<Item = usize>) -> Result<Event> {
        let mut bits = 0u32;
        for i in atoms {
            bits |= 1 << self.atom(i)?.0;
        }
        Ok(Event(bits))
    }

    pub fn complement(&self, x: Event) -> Event {
        Event(!x.0 & self.top().0)
    }

    /// `x → y = ¬x ∨ y`.
    pub fn implies(&self, x: Event, y: Event) -> Event {
        self.complement(x).join(y)
    }

    /// `x ↔ y`, the set of atoms on which `x` and `y` agree.
    pub fn iff(&self, x: Event, y: Event) -> Event {
        self.complement(Event(x.0 ^ y.0))
    }

    pub fn connectives(&self, x: Event, y: Event) -> Result<Connectives> {
        let x = self.check(x)?;
        let y = self.check(y)?;
        Ok(Connectives {
            meet: x.meet(y),
            join: x.join(y),
            complement_x: self.complement(x),
            implication: self.implies(x, y),
        })
    }

    pub fn leq(&self, x: Event, y: Event) -> Result<bool> {
        Ok(self.check(x)?.leq(self.check(y)?))
    }

    pub fn atoms_of(&self, x: Event) -> Result<Vec<AtomIndex>> {
        Ok(self.check(x)?.atoms().collect())
    }

    /// Every element of the algebra, ascending by bits.
    pub fn events(&self) -> impl Iterator<Item = Event> + Clone {
        (0..self.size() as u32).map(Event)
    }

    /// Every non-bottom element, ascending by bits.
    pub fn nonempty_events(&self) -> impl Iterator<Item = Event> + Clone {
        (1..self.size() as u32).map(Event)
    }

    pub fn atoms(&self) -> impl Iterator<Item = AtomIndex> + Clone {
        (0..self.names.len()).map(AtomIndex)
    }

    /// Renders an event with the algebra's atom names, e.g. `{w2,w3}`.
    pub fn display(&self, x: Event) -> String {
        let names: Vec<&str> = x.atoms().map(|a| self.atom_name(a)).collect();
        format!("{{{}}}", names.join(","))
    }
}
