//! Social choice rules stored as tables over a domain, and the rule-level
//! predicates: manipulation, range, dictatorship and universally beneficial
//! manipulation.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::domain::{majority_margin, Caps, Domain, DomainKind, DomainSpec};
use crate::order::{AltSet, Alternative, LinearOrder};
use crate::profile::Profile;
use crate::{Error, Result};

/// A total map from the profiles of a domain to alternatives, stored
/// extensionally and aligned with the domain's canonical indices.
#[derive(Debug, Clone)]
pub struct Rule {
    domain: Arc<Domain>,
    choice: Vec<Alternative>,
}

impl PartialEq for Rule {
    fn eq(&self, other: &Self) -> bool {
        self.choice == other.choice
            && (Arc::ptr_eq(&self.domain, &other.domain) || self.domain == other.domain)
    }
}

impl Eq for Rule {}

/// Individual `by` gains by reporting `via` instead of their order at `at`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManipulationWitness {
    pub at: Profile,
    pub at_index: usize,
    pub by: usize,
    pub via: Profile,
    pub via_index: usize,
    pub sincere_outcome: Alternative,
    pub manipulated_outcome: Alternative,
}

/// A profitable deviation by `by` that leaves `harmed` no better off.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UbmViolation {
    pub manipulation: ManipulationWitness,
    pub harmed: usize,
}

/// Two domain profiles differing by one adjacent swap in one individual's
/// order whose outcomes break the adjacent-swap consequence of
/// strategy-proofness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapViolation {
    pub before: usize,
    pub after: usize,
    pub individual: usize,
}

impl Rule {
    pub fn new(domain: Arc<Domain>, choice: Vec<Alternative>) -> Result<Rule> {
        if choice.len() != domain.len() {
            return Err(Error::Precondition(format!(
                "rule table has {} entries for a domain of {} profiles",
                choice.len(),
                domain.len()
            )));
        }
        let m = domain.m();
        if let Some(bad) = choice.iter().find(|a| a.index() >= m) {
            return Err(Error::Precondition(format!(
                "alternative index {} out of range",
                bad.0
            )));
        }
        Ok(Rule { domain, choice })
    }

    pub fn from_fn(domain: Arc<Domain>, f: impl Fn(&Profile) -> Alternative) -> Result<Rule> {
        let choice = domain.profiles().iter().map(f).collect();
        Rule::new(domain, choice)
    }

    pub fn constant(domain: Arc<Domain>, a: Alternative) -> Result<Rule> {
        let len = domain.len();
        Rule::new(domain, alloc::vec![a; len])
    }

    pub fn domain(&self) -> &Arc<Domain> {
        &self.domain
    }

    pub fn spec(&self) -> &DomainSpec {
        self.domain.spec()
    }

    pub fn choices(&self) -> &[Alternative] {
        &self.choice
    }

    pub fn choice_at(&self, i: usize) -> Alternative {
        self.choice[i]
    }

    pub fn evaluate(&self, p: &Profile) -> Result<Alternative> {
        if !self.domain.spec().fits(p) {
            return Err(Error::SpecMismatch);
        }
        match self.domain.index_of(p) {
            Some(i) => Ok(self.choice[i]),
            None if !p.is_non_paretian() => Err(Error::NotNonParetian),
            None => Err(Error::NotInDomain),
        }
    }

    /// The canonically first manipulation: smallest profile index, then
    /// smallest individual, then smallest deviation index.
    pub fn find_manipulation(&self) -> Option<ManipulationWitness> {
        let d = &self.domain;
        (0..d.len()).find_map(|i| {
            let sincere = self.choice[i];
            d.variants(i).find_map(|(h, j)| {
                let outcome = self.choice[j];
                d.profile(i)
                    .order(h)
                    .prefers(outcome, sincere)
                    .then(|| self.witness(i, h, j))
            })
        })
    }

    fn witness(&self, i: usize, h: usize, j: usize) -> ManipulationWitness {
        ManipulationWitness {
            at: self.domain.profile(i).clone(),
            at_index: i,
            by: h,
            via: self.domain.profile(j).clone(),
            via_index: j,
            sincere_outcome: self.choice[i],
            manipulated_outcome: self.choice[j],
        }
    }

    pub fn is_strategy_proof(&self) -> bool {
        self.find_manipulation().is_none()
    }

    pub fn require_strategy_proof(&self) -> Result<()> {
        match self.find_manipulation() {
            Some(w) => Err(Error::Manipulable(alloc::boxed::Box::new(w))),
            None => Ok(()),
        }
    }

    pub fn range(&self) -> AltSet {
        self.choice.iter().copied().collect()
    }

    pub fn is_full_range(&self) -> bool {
        self.range() == self.domain.spec().all_alternatives()
    }

    /// Whether `g(p)` is always `i`'s favourite member of `Range(g)`.
    pub fn is_dictated_by(&self, i: usize) -> bool {
        let range = self.range();
        self.domain
            .profiles()
            .iter()
            .zip(&self.choice)
            .all(|(p, &a)| p.order(i).top_in(range) == Some(a))
    }

    /// The smallest individual who dictates the rule, if any.
    pub fn find_dictator(&self) -> Option<usize> {
        (0..self.domain.n()).find(|&i| self.is_dictated_by(i))
    }

    /// First violation of universally beneficial manipulation: a profitable
    /// unilateral deviation that does not make every individual strictly
    /// better off. Only defined on the unrestricted domain.
    pub fn ubm_violation(&self) -> Result<Option<UbmViolation>> {
        let d = &self.domain;
        if !d.is_unrestricted() {
            return Err(Error::UnrestrictedDomainRequired);
        }
        for i in 0..d.len() {
            let p = d.profile(i);
            let sincere = self.choice[i];
            for (h, j) in d.variants(i) {
                let outcome = self.choice[j];
                if !p.order(h).prefers(outcome, sincere) {
                    continue;
                }
                if let Some(harmed) = (0..d.n()).find(|&k| !p.order(k).prefers(outcome, sincere)) {
                    return Ok(Some(UbmViolation {
                        manipulation: self.witness(i, h, j),
                        harmed,
                    }));
                }
            }
        }
        Ok(None)
    }

    pub fn is_ubm(&self) -> Result<bool> {
        Ok(self.ubm_violation()?.is_none())
    }

    /// Scans every pair of domain profiles that differ by swapping two
    /// adjacent alternatives `a ≻ b` in one individual's order. Outcomes
    /// may differ only when the rule picks `a` before and `b` after.
    pub fn adjacent_swap_violation(&self) -> Option<SwapViolation> {
        let d = &self.domain;
        for i in 0..d.len() {
            for (h, j) in d.variants(i) {
                let (before, after) = (d.profile(i).order(h), d.profile(j).order(h));
                let Some(k) = single_adjacent_swap(before, after) else {
                    continue;
                };
                let (hi, lo) = (before.at(k), before.at(k + 1));
                let (x, y) = (self.choice[i], self.choice[j]);
                if x != y && !(x == hi && y == lo) {
                    return Some(SwapViolation {
                        before: i,
                        after: j,
                        individual: h,
                    });
                }
            }
        }
        None
    }

    /// The same rule on a subdomain.
    pub fn restrict_to(&self, sub: Arc<Domain>) -> Result<Rule> {
        if sub.spec() != self.domain.spec() {
            return Err(Error::SpecMismatch);
        }
        let choice = sub
            .profiles()
            .iter()
            .map(|p| self.evaluate(p))
            .collect::<Result<Vec<_>>>()?;
        Rule::new(sub, choice)
    }
}

/// Rank `k` such that `after` is `before` with ranks `k`, `k + 1` swapped.
fn single_adjacent_swap(before: &LinearOrder, after: &LinearOrder) -> Option<usize> {
    let len = before.len();
    let k = (0..len).find(|&k| before.at(k) != after.at(k))?;
    if k + 1 >= len || before.at(k) != after.at(k + 1) || before.at(k + 1) != after.at(k) {
        return None;
    }
    ((k + 2)..len)
        .all(|r| before.at(r) == after.at(r))
        .then_some(k)
}

/// The rule that always picks individual `i`'s top.
pub fn dictator_rule(domain: Arc<Domain>, i: usize) -> Result<Rule> {
    if i >= domain.n() {
        return Err(Error::Precondition(format!(
            "individual {} does not exist for n = {}",
            i + 1,
            domain.n()
        )));
    }
    Rule::from_fn(domain, |p| p.order(i).top())
}

/// The domain `NP(n, 3) ∪ {profiles where z is everyone's top}` over the
/// alternatives `x, y, z`, with the rule that picks the pairwise-majority
/// winner between `x` and `y` on the non-Paretian part and `z` elsewhere.
/// Strategy-proof, full-range and non-dictatorial for odd `n`.
pub fn majority_superset_rule(n: usize, caps: &Caps) -> Result<Rule> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenIndividuals(n));
    }
    let spec = DomainSpec::with_labels(n, alloc::vec!['x', 'y', 'z'])?;
    let (x, y, z) = (Alternative(0), Alternative(1), Alternative(2));
    let all = Domain::unrestricted(spec.clone(), caps)?;
    let members: Vec<Profile> = all
        .profiles()
        .iter()
        .filter(|p| p.is_non_paretian() || p.orders().iter().all(|o| o.top() == z))
        .cloned()
        .collect();
    let domain = Arc::new(Domain::from_profiles(spec, members)?);
    Rule::from_fn(domain, |p| {
        if !p.is_non_paretian() {
            z
        } else if 2 * majority_margin(p, x, y) > n {
            x
        } else {
            y
        }
    })
}

/// Picks `ψ(u)`, individual 1's favourite member of `s`, unless exactly one
/// alternative Pareto-dominates `ψ(u)`; then that dominator is chosen.
pub fn conclusion_ubm_rule(domain: Arc<Domain>, s: AltSet) -> Result<Rule> {
    let m = domain.m();
    if s.len() != 3 || !s.is_subset(AltSet::full(m)) {
        return Err(Error::Precondition("S must hold exactly three alternatives".into()));
    }
    if m <= 3 {
        return Err(Error::Precondition("the rule needs m > 3".into()));
    }
    Rule::from_fn(domain, |p| {
        let psi = p.order(0).top_in(s).expect("S is nonempty");
        let dominators = p.dominators_of(psi);
        if dominators.len() == 1 {
            dominators.iter().next().expect("one dominator")
        } else {
            psi
        }
    })
}

/// Builds a full-range rule on `NP(n, |S|)` from a strategy-proof rule
/// `g_star` on `NP(n, m)` with range `S`, `|S| ≥ 3`.
///
/// A profile `u` over `S` is extended to `u*` over `X`: individual 1 puts
/// `outside_order` on top of `u(1)`, everyone else appends it reversed
/// below `u(i)`. Then `g**(u) = g_star(u*)`.
///
/// The small domain's alternatives are the members of `S` in ascending
/// index order, keeping their labels.
pub fn restricted_range_lift(
    g_star: &Rule,
    outside_order: &[Alternative],
    caps: &Caps,
) -> Result<Rule> {
    let big = g_star.spec();
    if g_star.domain().kind() != DomainKind::NonParetian {
        return Err(Error::Precondition("the lift needs a rule on NP(n, m)".into()));
    }
    let s = g_star.range();
    if s.len() < 3 {
        return Err(Error::Precondition("the range must hold at least three alternatives".into()));
    }
    let outside = big.all_alternatives().difference(s);
    let given: AltSet = outside_order.iter().copied().collect();
    if given != outside || outside_order.len() != outside.len() {
        return Err(Error::Precondition(
            "outside_order must list every alternative outside the range exactly once".into(),
        ));
    }
    let to_big: Vec<Alternative> = s.iter().collect();
    let small_spec =
        DomainSpec::with_labels(big.n(), to_big.iter().map(|&a| big.label(a)).collect())?;
    let small = Arc::new(Domain::non_paretian(small_spec, caps)?);
    let mut choice = Vec::with_capacity(small.len());
    for u in small.profiles() {
        let lifted = lift_profile(u, &to_big, outside_order)?;
        if !lifted.is_non_paretian() {
            return Err(Error::Construction(format!("lifted profile {lifted:?} is Pareto-dominated")));
        }
        let chosen = g_star.evaluate(&lifted)?;
        let k = to_big
            .iter()
            .position(|&a| a == chosen)
            .expect("outcome lies in the range");
        choice.push(Alternative(k as u8));
    }
    Rule::new(small, choice)
}

/// The profile `u*` of [`restricted_range_lift`].
pub fn lift_profile(u: &Profile, to_big: &[Alternative], outside_order: &[Alternative]) -> Result<Profile> {
    let orders = u
        .orders()
        .iter()
        .enumerate()
        .map(|(i, o)| {
            let mapped = o.alternatives().map(|a| to_big[a.index()]);
            let ranks: Vec<Alternative> = if i == 0 {
                outside_order.iter().copied().chain(mapped).collect()
            } else {
                mapped.chain(outside_order.iter().rev().copied()).collect()
            };
            LinearOrder::new(&ranks)
        })
        .collect::<Result<Vec<_>>>()?;
    Profile::new(orders)
}
