//! Alternatives, alternative sets and strict linear orders.

use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// Upper bound on the number of alternatives any order can carry.
pub const MAX_ALTERNATIVES: usize = 8;

const ABSENT: u8 = u8::MAX;

/// An alternative, identified by its dense index within a domain spec.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Alternative(pub u8);

impl Alternative {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A set of alternatives stored as a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct AltSet(u16);

impl AltSet {
    pub const EMPTY: AltSet = AltSet(0);

    /// `{0, 1, .., m - 1}`.
    pub fn full(m: usize) -> AltSet {
        debug_assert!(m <= MAX_ALTERNATIVES);
        AltSet(((1u32 << m) - 1) as u16)
    }

    pub fn from_bits(bits: u16) -> AltSet {
        AltSet(bits)
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    #[inline]
    pub fn contains(self, a: Alternative) -> bool {
        self.0 & (1 << a.0) != 0
    }

    pub fn insert(&mut self, a: Alternative) {
        self.0 |= 1 << a.0;
    }

    pub fn remove(&mut self, a: Alternative) {
        self.0 &= !(1 << a.0);
    }

    pub fn with(mut self, a: Alternative) -> AltSet {
        self.insert(a);
        self
    }

    pub fn without(mut self, a: Alternative) -> AltSet {
        self.remove(a);
        self
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: AltSet) -> AltSet {
        AltSet(self.0 | other.0)
    }

    pub fn difference(self, other: AltSet) -> AltSet {
        AltSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: AltSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Members in ascending index order.
    pub fn iter(self) -> impl Iterator<Item = Alternative> {
        (0..16u8).filter(move |&i| self.0 & (1 << i) != 0).map(Alternative)
    }

    /// Every subset of `self`, in ascending bit-mask order.
    pub fn subsets(self) -> impl Iterator<Item = AltSet> {
        let full = self.0 as u32;
        (0..=full)
            .filter(move |s| s & !full == 0)
            .map(|s| AltSet(s as u16))
    }
}

impl FromIterator<Alternative> for AltSet {
    fn from_iter<I: IntoIterator<Item = Alternative>>(iter: I) -> Self {
        let mut set = AltSet::EMPTY;
        for a in iter {
            set.insert(a);
        }
        set
    }
}

impl fmt::Debug for AltSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|a| a.0)).finish()
    }
}

/// A strict linear order over a set of alternatives, most preferred first.
///
/// Orders over the whole alternative set `{0, .., m - 1}` are the elements
/// of `L(X)`; restrictions produce orders over subsets, which keep the
/// original alternative indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct LinearOrder {
    len: u8,
    ranks: [u8; MAX_ALTERNATIVES],
    pos: [u8; MAX_ALTERNATIVES],
}

impl LinearOrder {
    /// Builds an order from its rank sequence, most preferred first.
    pub fn new(ranks: &[Alternative]) -> Result<LinearOrder> {
        if ranks.len() > MAX_ALTERNATIVES {
            return Err(Error::InvalidSpec(alloc::format!(
                "at most {MAX_ALTERNATIVES} alternatives are supported"
            )));
        }
        let mut order = LinearOrder {
            len: ranks.len() as u8,
            ranks: [0; MAX_ALTERNATIVES],
            pos: [ABSENT; MAX_ALTERNATIVES],
        };
        for (k, &a) in ranks.iter().enumerate() {
            if a.index() >= MAX_ALTERNATIVES {
                return Err(Error::InvalidSpec(alloc::format!(
                    "alternative index {} out of range",
                    a.0
                )));
            }
            if order.pos[a.index()] != ABSENT {
                return Err(Error::Precondition(alloc::format!(
                    "alternative {} ranked twice",
                    a.0
                )));
            }
            order.ranks[k] = a.0;
            order.pos[a.index()] = k as u8;
        }
        Ok(order)
    }

    /// Convenience constructor from raw indices. Panics on invalid input.
    pub fn from_indices(ranks: &[u8]) -> LinearOrder {
        let alts: Vec<Alternative> = ranks.iter().map(|&a| Alternative(a)).collect();
        LinearOrder::new(&alts).expect("invalid rank sequence")
    }

    /// The order `0 ≻ 1 ≻ .. ≻ m - 1`.
    pub fn identity(m: usize) -> LinearOrder {
        let alts: Vec<u8> = (0..m as u8).collect();
        LinearOrder::from_indices(&alts)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The rank sequence as raw indices.
    pub fn rank_seq(&self) -> &[u8] {
        &self.ranks[..self.len()]
    }

    pub fn alternatives(&self) -> impl Iterator<Item = Alternative> + '_ {
        self.rank_seq().iter().map(|&a| Alternative(a))
    }

    /// Alternative at rank `k` (0 is the top).
    pub fn at(&self, k: usize) -> Alternative {
        debug_assert!(k < self.len());
        Alternative(self.ranks[k])
    }

    pub fn position(&self, a: Alternative) -> Option<usize> {
        match self.pos.get(a.index()) {
            Some(&p) if p != ABSENT => Some(p as usize),
            _ => None,
        }
    }

    pub fn contains(&self, a: Alternative) -> bool {
        self.position(a).is_some()
    }

    /// `a ≻ b`. Both alternatives must be ranked.
    #[inline]
    pub fn prefers(&self, a: Alternative, b: Alternative) -> bool {
        debug_assert!(self.contains(a) && self.contains(b));
        self.pos[a.index()] < self.pos[b.index()]
    }

    pub fn top(&self) -> Alternative {
        self.at(0)
    }

    pub fn bottom(&self) -> Alternative {
        self.at(self.len() - 1)
    }

    /// Most preferred member of `set`, if any member is ranked.
    pub fn top_in(&self, set: AltSet) -> Option<Alternative> {
        self.alternatives().find(|&a| set.contains(a))
    }

    pub fn support(&self) -> AltSet {
        self.alternatives().collect()
    }

    /// The reversed order.
    pub fn inverse(&self) -> LinearOrder {
        let mut out = *self;
        let n = self.len();
        for k in 0..n {
            out.ranks[k] = self.ranks[n - 1 - k];
            out.pos[out.ranks[k] as usize] = k as u8;
        }
        out
    }

    /// The relative order of the members of `set`.
    pub fn restrict(&self, set: AltSet) -> Result<LinearOrder> {
        let kept: Vec<Alternative> = self.alternatives().filter(|&a| set.contains(a)).collect();
        if kept.is_empty() {
            return Err(Error::EmptyRestriction);
        }
        LinearOrder::new(&kept)
    }

    /// Whether both orders rank the members of `set` identically. Members
    /// missing from either order are ignored.
    pub fn agrees_on(&self, other: &LinearOrder, set: AltSet) -> bool {
        let mine = self.alternatives().filter(|&a| set.contains(a));
        let theirs = other.alternatives().filter(|&a| set.contains(a));
        mine.eq(theirs)
    }

    /// Swaps the alternatives at ranks `k` and `k + 1`.
    pub fn swap_adjacent(&mut self, k: usize) {
        debug_assert!(k + 1 < self.len());
        self.ranks.swap(k, k + 1);
        self.pos[self.ranks[k] as usize] = k as u8;
        self.pos[self.ranks[k + 1] as usize] = (k + 1) as u8;
    }

    /// Moves `a` to rank `target`, shifting the alternatives in between.
    pub fn move_to(&mut self, a: Alternative, target: usize) {
        let from = self.position(a).expect("alternative not ranked");
        debug_assert!(target < self.len());
        if from < target {
            for k in from..target {
                self.swap_adjacent(k);
            }
        } else {
            for k in (target..from).rev() {
                self.swap_adjacent(k);
            }
        }
    }

    /// Lexicographic index among all permutations of `{0, .., m - 1}`.
    ///
    /// Only meaningful for orders over the full set `{0, .., len - 1}`.
    pub fn lex_index(&self) -> u64 {
        let n = self.len();
        let mut used = 0u16;
        let mut index = 0u64;
        for k in 0..n {
            let a = self.ranks[k];
            let smaller_unused = (0..a).filter(|&b| used & (1 << b) == 0).count() as u64;
            index = index * (n - k) as u64 + smaller_unused;
            used |= 1 << a;
        }
        index
    }

    /// Inverse of [`LinearOrder::lex_index`].
    pub fn from_lex_index(m: usize, mut index: u64) -> LinearOrder {
        let mut digits = [0u8; MAX_ALTERNATIVES];
        for k in (0..m).rev() {
            let base = (m - k) as u64;
            digits[k] = (index % base) as u8;
            index /= base;
        }
        let mut free: Vec<u8> = (0..m as u8).collect();
        let ranks: Vec<u8> = (0..m).map(|k| free.remove(digits[k] as usize)).collect();
        LinearOrder::from_indices(&ranks)
    }

    /// Writes the order with one label character per alternative.
    pub fn write_labels<W: fmt::Write>(&self, labels: &[char], out: &mut W) -> fmt::Result {
        for a in self.alternatives() {
            out.write_char(labels[a.index()])?;
        }
        Ok(())
    }
}

impl PartialOrd for LinearOrder {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LinearOrder {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.rank_seq().cmp(other.rank_seq())
    }
}

impl fmt::Debug for LinearOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, a) in self.alternatives().enumerate() {
            if k > 0 {
                f.write_str(">")?;
            }
            write!(f, "{}", a.0)?;
        }
        Ok(())
    }
}

/// `m!`
pub fn factorial(m: usize) -> u64 {
    (1..=m as u64).product()
}

/// All `m!` orders over `{0, .., m - 1}` in lexicographic order of their
/// rank sequences.
pub fn all_orderings(m: usize) -> Vec<LinearOrder> {
    (0..factorial(m))
        .map(|i| LinearOrder::from_lex_index(m, i))
        .collect()
}
