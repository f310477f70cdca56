use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{Atom, Formula, LogicError};

pub const DEFAULT_ATOM_LIMIT: usize = 20;

/// Ordered atom set. World `w` assigns atom `i` the value of bit `i` of `w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomUniverse {
    atoms: Vec<Atom>,
    index: HashMap<Atom, usize>,
}

impl AtomUniverse {
    pub fn new(atoms: impl IntoIterator<Item = Atom>, limit: usize) -> Result<Self, LogicError> {
        let set: BTreeSet<Atom> = atoms.into_iter().collect();
        if set.len() > limit {
            return Err(LogicError::AtomLimit { atoms: set.len(), limit });
        }
        let atoms: Vec<Atom> = set.into_iter().collect();
        let index = atoms.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
        Ok(AtomUniverse { atoms, index })
    }

    /// Universe spanning every atom mentioned by `formulas`.
    pub fn spanning<'a>(formulas: impl IntoIterator<Item = &'a Formula>, limit: usize) -> Result<Self, LogicError> {
        let mut set = BTreeSet::new();
        for f in formulas {
            set.extend(f.atoms());
        }
        Self::new(set, limit)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn index_of(&self, atom: &Atom) -> Option<usize> {
        self.index.get(atom).copied()
    }

    pub fn contains_all(&self, f: &Formula) -> bool {
        f.atoms().iter().all(|a| self.index.contains_key(a))
    }

    pub fn world_count(&self) -> usize {
        1usize << self.atoms.len()
    }

    pub fn constituent(&self, world: usize) -> Constituent {
        let assignment = self
            .atoms
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), world >> i & 1 == 1))
            .collect();
        Constituent { assignment }
    }

    /// Set of worlds satisfying `f`, built with word-wide bit operations.
    pub fn table(&self, f: &Formula) -> Result<TruthTable, LogicError> {
        let len = self.world_count();
        Ok(match f {
            Formula::Top => TruthTable::full(len),
            Formula::Bottom => TruthTable::empty(len),
            Formula::Atom(a) => {
                let i = self.index_of(a).ok_or_else(|| LogicError::MissingAtom(a.clone()))?;
                TruthTable::atom(len, i)
            }
            Formula::Not(g) => self.table(g)?.not(),
            Formula::And(a, b) => self.table(a)?.and(&self.table(b)?),
            Formula::Or(a, b) => self.table(a)?.or(&self.table(b)?),
            Formula::Implies(a, b) => self.table(a)?.not().or(&self.table(b)?),
            Formula::Iff(a, b) => {
                let (ta, tb) = (self.table(a)?, self.table(b)?);
                ta.and(&tb).or(&ta.not().and(&tb.not()))
            }
        })
    }
}

/// Bitset over the worlds of a universe.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TruthTable {
    words: Vec<u64>,
    len: usize,
}

impl TruthTable {
    pub fn empty(len: usize) -> Self {
        TruthTable {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn full(len: usize) -> Self {
        let mut t = TruthTable {
            words: vec![u64::MAX; len.div_ceil(64)],
            len,
        };
        t.mask_tail();
        t
    }

    fn atom(len: usize, bit: usize) -> Self {
        let mut t = Self::empty(len);
        if bit < 6 {
            // Period divides 64: one repeated word pattern.
            let mut pattern = 0u64;
            for w in 0..64 {
                if w >> bit & 1 == 1 {
                    pattern |= 1 << w;
                }
            }
            t.words.iter_mut().for_each(|x| *x = pattern);
        } else {
            let run = 1usize << (bit - 6);
            for (k, x) in t.words.iter_mut().enumerate() {
                if (k / run) % 2 == 1 {
                    *x = u64::MAX;
                }
            }
        }
        t.mask_tail();
        t
    }

    fn mask_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn get(&self, world: usize) -> bool {
        self.words[world / 64] >> (world % 64) & 1 == 1
    }

    pub fn set(&mut self, world: usize, value: bool) {
        let bit = 1u64 << (world % 64);
        if value {
            self.words[world / 64] |= bit;
        } else {
            self.words[world / 64] &= !bit;
        }
    }

    pub fn not(&self) -> Self {
        let mut t = TruthTable {
            words: self.words.iter().map(|w| !w).collect(),
            len: self.len,
        };
        t.mask_tail();
        t
    }

    pub fn and(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len, other.len);
        TruthTable {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
            len: self.len,
        }
    }

    pub fn or(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len, other.len);
        TruthTable {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
            len: self.len,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.not().is_empty()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// `self ∧ other_mask = other ∧ self_mask`, without allocating.
    pub fn agrees_within(&self, self_mask: &Self, other: &Self, other_mask: &Self) -> bool {
        (0..self.words.len()).all(|k| self.words[k] & other_mask.words[k] == other.words[k] & self_mask.words[k])
    }

    /// Indices of the worlds in the set, ascending.
    pub fn worlds(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&w| self.get(w))
    }
}

/// Total truth assignment over a declared atom set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constituent {
    assignment: BTreeMap<Atom, bool>,
}

impl Constituent {
    pub fn new(assignment: impl IntoIterator<Item = (Atom, bool)>) -> Self {
        Constituent {
            assignment: assignment.into_iter().collect(),
        }
    }

    pub fn value(&self, atom: &Atom) -> Option<bool> {
        self.assignment.get(atom).copied()
    }

    pub fn assignment(&self) -> &BTreeMap<Atom, bool> {
        &self.assignment
    }
}
