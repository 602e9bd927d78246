//! Preference profiles, Pareto domination and the text codec.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::order::{factorial, AltSet, Alternative, LinearOrder};
use crate::{Error, Result};

/// One linear order per individual. Individuals are indexed from 0.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Profile {
    orders: Vec<LinearOrder>,
}

impl Profile {
    pub fn new(orders: Vec<LinearOrder>) -> Result<Profile> {
        let first = orders
            .first()
            .ok_or_else(|| Error::Precondition("a profile needs at least one individual".into()))?;
        let support = first.support();
        if orders.iter().any(|o| o.support() != support) {
            return Err(Error::SpecMismatch);
        }
        Ok(Profile { orders })
    }

    pub fn n(&self) -> usize {
        self.orders.len()
    }

    /// Number of ranked alternatives.
    pub fn m(&self) -> usize {
        self.orders[0].len()
    }

    pub fn support(&self) -> AltSet {
        self.orders[0].support()
    }

    pub fn order(&self, i: usize) -> &LinearOrder {
        &self.orders[i]
    }

    pub fn orders(&self) -> &[LinearOrder] {
        &self.orders
    }

    /// The `h`-variant obtained by replacing individual `h`'s order.
    pub fn with_order(&self, h: usize, order: LinearOrder) -> Profile {
        let mut orders = self.orders.clone();
        orders[h] = order;
        Profile { orders }
    }

    pub fn set_order(&mut self, h: usize, order: LinearOrder) {
        debug_assert_eq!(order.support(), self.support());
        self.orders[h] = order;
    }

    pub(crate) fn order_mut(&mut self, h: usize) -> &mut LinearOrder {
        &mut self.orders[h]
    }

    /// Whether every individual ranks `x` above `y`.
    pub fn pareto_dominates(&self, x: Alternative, y: Alternative) -> Result<bool> {
        if x == y {
            return Err(Error::SameAlternative);
        }
        Ok(self.unanimous(x, y))
    }

    #[inline]
    fn unanimous(&self, x: Alternative, y: Alternative) -> bool {
        self.orders.iter().all(|o| o.prefers(x, y))
    }

    /// Whether no alternative Pareto-dominates another.
    pub fn is_non_paretian(&self) -> bool {
        let alts: Vec<Alternative> = self.orders[0].alternatives().collect();
        for (k, &x) in alts.iter().enumerate() {
            for &y in &alts[k + 1..] {
                if self.unanimous(x, y) || self.unanimous(y, x) {
                    return false;
                }
            }
        }
        true
    }

    /// Alternatives that Pareto-dominate `y`.
    pub fn dominators_of(&self, y: Alternative) -> AltSet {
        self.orders[0]
            .alternatives()
            .filter(|&x| x != y && self.unanimous(x, y))
            .collect()
    }

    /// The single individual whose order differs between `self` and `other`,
    /// or `None` when the profiles are equal or differ in several orders.
    pub fn h_variant_of(&self, other: &Profile) -> Result<Option<usize>> {
        self.check_compatible(other)?;
        let mut differing = self
            .orders
            .iter()
            .zip(&other.orders)
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(i, _)| i);
        match (differing.next(), differing.next()) {
            (Some(h), None) => Ok(Some(h)),
            _ => Ok(None),
        }
    }

    /// Number of individuals whose orders differ.
    pub fn distance(&self, other: &Profile) -> usize {
        self.orders
            .iter()
            .zip(&other.orders)
            .filter(|(a, b)| a != b)
            .count()
    }

    pub(crate) fn check_compatible(&self, other: &Profile) -> Result<()> {
        if self.n() != other.n() || self.support() != other.support() {
            return Err(Error::SpecMismatch);
        }
        Ok(())
    }

    pub fn restrict(&self, set: AltSet) -> Result<Profile> {
        let orders = self
            .orders
            .iter()
            .map(|o| o.restrict(set))
            .collect::<Result<Vec<_>>>()?;
        Ok(Profile { orders })
    }

    /// `self|S = other|S`, defined for every `S` including the empty set.
    pub fn agrees_on(&self, other: &Profile, set: AltSet) -> bool {
        self.n() == other.n()
            && self
                .orders
                .iter()
                .zip(&other.orders)
                .all(|(a, b)| a.agrees_on(b, set))
    }

    /// Position in the lexicographic enumeration of all profiles over
    /// `{0, .., m - 1}`: the mixed-radix number whose digits are the
    /// individuals' order indices, individual 0 most significant.
    pub fn code(&self) -> u64 {
        let base = factorial(self.m());
        self.orders
            .iter()
            .fold(0u64, |acc, o| acc * base + o.lex_index())
    }

    pub fn from_code(n: usize, m: usize, mut code: u64) -> Profile {
        let base = factorial(m);
        let mut orders = alloc::vec![LinearOrder::identity(m); n];
        for slot in orders.iter_mut().rev() {
            *slot = LinearOrder::from_lex_index(m, code % base);
            code /= base;
        }
        Profile { orders }
    }

    /// Reads `n` whitespace-separated tokens, each a permutation of `labels`
    /// written most-preferred first.
    pub fn parse(text: &str, labels: &[char], n: usize) -> Result<Profile> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() != n {
            return Err(Error::Parse {
                token: tokens.len().min(n),
                message: format!("expected {n} orderings, found {}", tokens.len()),
            });
        }
        let orders = tokens
            .iter()
            .enumerate()
            .map(|(t, tok)| parse_order(tok, labels).map_err(|message| Error::Parse { token: t, message }))
            .collect::<Result<Vec<_>>>()?;
        Ok(Profile { orders })
    }

    /// Canonical text form, one token per individual.
    pub fn format(&self, labels: &[char]) -> String {
        let mut out = String::new();
        self.write_labels(labels, &mut out)
            .expect("writing to a String cannot fail");
        out
    }

    pub fn write_labels<W: fmt::Write>(&self, labels: &[char], out: &mut W) -> fmt::Result {
        for (i, o) in self.orders.iter().enumerate() {
            if i > 0 {
                out.write_char(' ')?;
            }
            o.write_labels(labels, out)?;
        }
        Ok(())
    }
}

fn parse_order(token: &str, labels: &[char]) -> core::result::Result<LinearOrder, String> {
    let mut ranks = Vec::with_capacity(labels.len());
    let mut seen = AltSet::EMPTY;
    for ch in token.chars() {
        let idx = labels
            .iter()
            .position(|&l| l == ch)
            .ok_or_else(|| format!("unknown label '{ch}' in \"{token}\""))?;
        let a = Alternative(idx as u8);
        if seen.contains(a) {
            return Err(format!("duplicate label '{ch}' in \"{token}\""));
        }
        seen.insert(a);
        ranks.push(a);
    }
    if ranks.len() != labels.len() {
        return Err(format!(
            "\"{token}\" ranks {} of {} alternatives",
            ranks.len(),
            labels.len()
        ));
    }
    LinearOrder::new(&ranks).map_err(|e| format!("{e}"))
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.orders.iter()).finish()
    }
}
