//! S-paths: sequences of non-Paretian profiles that change one individual
//! at a time while every step keeps the restriction to `S` fixed.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::vec::Vec;

use crate::order::{all_orderings, AltSet, Alternative, LinearOrder};
use crate::profile::Profile;
use crate::rules::Rule;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SPath {
    s: AltSet,
    steps: Vec<Profile>,
}

/// First condition an [`SPath`] breaks; `step` indexes the offending
/// profile, or the first of the offending consecutive pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathViolation {
    Empty,
    WrongStart,
    WrongEnd,
    OutsideDomain { step: usize },
    NotVariants { step: usize },
    RestrictionChanged { step: usize },
}

impl SPath {
    pub fn new(s: AltSet, steps: Vec<Profile>) -> SPath {
        SPath { s, steps }
    }

    pub fn s(&self) -> AltSet {
        self.s
    }

    pub fn steps(&self) -> &[Profile] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn reversed(&self) -> SPath {
        let mut steps = self.steps.clone();
        steps.reverse();
        SPath { s: self.s, steps }
    }

    /// Appends `next` verbatim; the shared endpoint appears twice.
    pub fn concat(&self, next: &SPath) -> SPath {
        let mut steps = self.steps.clone();
        steps.extend(next.steps.iter().cloned());
        SPath { s: self.s, steps }
    }

    /// Checks that the path starts at `u`, ends at `v`, stays in the
    /// non-Paretian domain, changes at most one individual per step and
    /// never changes the restriction to `S`.
    ///
    /// Consecutive equal profiles are allowed: they are `h`-variants for
    /// every `h`.
    pub fn validate(&self, u: &Profile, v: &Profile) -> core::result::Result<(), PathViolation> {
        let (first, last) = match (self.steps.first(), self.steps.last()) {
            (Some(f), Some(l)) => (f, l),
            _ => return Err(PathViolation::Empty),
        };
        if first != u {
            return Err(PathViolation::WrongStart);
        }
        if last != v {
            return Err(PathViolation::WrongEnd);
        }
        for (t, p) in self.steps.iter().enumerate() {
            if p.n() != u.n() || p.support() != u.support() || !p.is_non_paretian() {
                return Err(PathViolation::OutsideDomain { step: t });
            }
        }
        for (t, w) in self.steps.windows(2).enumerate() {
            if w[0].distance(&w[1]) > 1 {
                return Err(PathViolation::NotVariants { step: t });
            }
            if !w[0].agrees_on(&w[1], self.s) {
                return Err(PathViolation::RestrictionChanged { step: t });
            }
        }
        Ok(())
    }
}

fn check_endpoints(u: &Profile, v: &Profile, s: AltSet) -> Result<()> {
    u.check_compatible(v)?;
    if !u.is_non_paretian() || !v.is_non_paretian() {
        return Err(Error::NotNonParetian);
    }
    if !s.is_subset(u.support()) {
        return Err(Error::Precondition("S is not a set of ranked alternatives".into()));
    }
    if !u.agrees_on(v, s) {
        return Err(Error::Precondition("the endpoints disagree on S".into()));
    }
    Ok(())
}

/// Path between two profiles that agree on `X∖{x}`.
///
/// Both endpoints are walked to the pivot profile where `x` is individual
/// 1's top and everyone else's bottom; the second walk is reversed.
pub fn build_spath_codim1(u: &Profile, v: &Profile, x: Alternative) -> Result<SPath> {
    if !u.support().contains(x) {
        return Err(Error::Precondition("x is not a ranked alternative".into()));
    }
    build_spath(u, v, u.support().without(x))
}

/// Path between two profiles that agree on `S`.
///
/// The alternatives outside `S` are processed in ascending index order
/// `x, y, .., z`. Each profile is walked to the pivot where individual 1
/// ranks `x y .. z` above `u(1)|S` and everybody else ranks `u(i)|S` above
/// `z .. y x`; the walk from `v` is reversed and appended.
pub fn build_spath(u: &Profile, v: &Profile, s: AltSet) -> Result<SPath> {
    check_endpoints(u, v, s)?;
    let outside: Vec<Alternative> = u.support().difference(s).iter().collect();
    let mut steps = walk_to_pivot(u, &outside)?;
    let back = walk_to_pivot(v, &outside)?;
    if steps.last() != back.last() {
        return Err(Error::Construction("walks ended at different pivots".into()));
    }
    steps.extend(back.into_iter().rev().skip(1));
    Ok(SPath { s, steps })
}

/// Walks `start` to the staged pivot for `outside`, fixing one outside
/// alternative per stage on the still-active alternatives.
fn walk_to_pivot(start: &Profile, outside: &[Alternative]) -> Result<Vec<Profile>> {
    let mut path = alloc::vec![start.clone()];
    for (k, &x) in outside.iter().enumerate() {
        let frozen = &outside[..k];
        let active = start.support().difference(frozen.iter().copied().collect());
        let current = path.last().expect("path is nonempty").restrict(active)?;
        for sub in raise_to_pivot(&current, x)?.into_iter().skip(1) {
            path.push(embed(&sub, frozen)?);
        }
    }
    Ok(path)
}

/// Puts `frozen` above individual 1's order and reversed below everyone
/// else's.
fn embed(sub: &Profile, frozen: &[Alternative]) -> Result<Profile> {
    if frozen.is_empty() {
        return Ok(sub.clone());
    }
    let orders = sub
        .orders()
        .iter()
        .enumerate()
        .map(|(i, o)| {
            let ranks: Vec<Alternative> = if i == 0 {
                frozen.iter().copied().chain(o.alternatives()).collect()
            } else {
                o.alternatives().chain(frozen.iter().rev().copied()).collect()
            };
            LinearOrder::new(&ranks)
        })
        .collect::<Result<Vec<_>>>()?;
    Profile::new(orders)
}

/// The single-alternative walk: raise `x` one rank at a time in individual
/// 1's order, then sink it to the bottom for each other individual.
///
/// A raise of `x` over `c` is immediate when some other individual ranks
/// `c` above `x`. Otherwise individual 2 first moves `x` to just below `c`,
/// which keeps the profile non-Paretian.
fn raise_to_pivot(start: &Profile, x: Alternative) -> Result<Vec<Profile>> {
    let n = start.n();
    let mut current = start.clone();
    let mut path = alloc::vec![current.clone()];
    let push = |p: &Profile, path: &mut Vec<Profile>| -> Result<()> {
        if !p.is_non_paretian() {
            return Err(Error::Construction(format!("step {} is {p:?}", path.len())));
        }
        path.push(p.clone());
        Ok(())
    };
    loop {
        let pos = current.order(0).position(x).expect("x is ranked");
        if pos == 0 {
            break;
        }
        let c = current.order(0).at(pos - 1);
        let someone_prefers_c = (1..n).any(|j| current.order(j).prefers(c, x));
        if !someone_prefers_c {
            if n < 2 {
                return Err(Error::Construction("cannot raise x with one individual".into()));
            }
            let target = current.order(1).position(c).expect("c is ranked");
            current.order_mut(1).move_to(x, target);
            push(&current, &mut path)?;
        }
        current.order_mut(0).swap_adjacent(pos - 1);
        push(&current, &mut path)?;
    }
    for i in 1..n {
        let bottom = current.order(i).len() - 1;
        if current.order(i).position(x) != Some(bottom) {
            current.order_mut(i).move_to(x, bottom);
            push(&current, &mut path)?;
        }
    }
    Ok(path)
}

/// Breadth-first search over the fiber `{w ∈ NP : w|S = u|S}` with edges
/// between `h`-variants. Returns a shortest path, or `None` when `v` is not
/// reachable. Fails once more than `max_visited` profiles are explored.
pub fn bfs_spath_oracle(
    u: &Profile,
    v: &Profile,
    s: AltSet,
    max_visited: usize,
) -> Result<Option<SPath>> {
    check_endpoints(u, v, s)?;
    let parent = bfs(u, s, max_visited, Some(v))?;
    if !parent.contains_key(v) {
        return Ok(None);
    }
    let mut steps = alloc::vec![v.clone()];
    let mut cursor = v;
    while let Some(Some(prev)) = parent.get(cursor) {
        steps.push(prev.clone());
        cursor = prev;
    }
    steps.reverse();
    Ok(Some(SPath { s, steps }))
}

/// Every profile reachable from `u` inside its fiber, in ascending order.
pub fn fiber_component(u: &Profile, s: AltSet, max_visited: usize) -> Result<Vec<Profile>> {
    check_endpoints(u, u, s)?;
    Ok(bfs(u, s, max_visited, None)?.into_keys().collect())
}

fn bfs(
    u: &Profile,
    s: AltSet,
    max_visited: usize,
    stop_at: Option<&Profile>,
) -> Result<BTreeMap<Profile, Option<Profile>>> {
    let m = u.m();
    if u.support() != AltSet::full(m) {
        return Err(Error::Precondition("profiles must rank {0, .., m - 1}".into()));
    }
    let orders = all_orderings(m);
    let mut parent: BTreeMap<Profile, Option<Profile>> = BTreeMap::new();
    let mut queue = VecDeque::new();
    parent.insert(u.clone(), None);
    queue.push_back(u.clone());
    while let Some(w) = queue.pop_front() {
        if Some(&w) == stop_at {
            break;
        }
        for h in 0..w.n() {
            for o in &orders {
                if o == w.order(h) {
                    continue;
                }
                let q = w.with_order(h, *o);
                if parent.contains_key(&q) || !q.agrees_on(u, s) || !q.is_non_paretian() {
                    continue;
                }
                if parent.len() >= max_visited {
                    return Err(Error::CapExceeded {
                        cap: "max_visited",
                        limit: max_visited as u64,
                        requested: max_visited as u64 + 1,
                    });
                }
                parent.insert(q.clone(), Some(w.clone()));
                queue.push_back(q);
            }
        }
    }
    Ok(parent)
}

/// For a strategy-proof rule with range `S`: the first pair of domain
/// indices `(i, j)`, `i < j`, with `u_i|S = u_j|S` but different outcomes.
pub fn check_equivalence(g: &Rule) -> Result<Option<(usize, usize)>> {
    g.require_strategy_proof()?;
    let s = g.range();
    let d = g.domain();
    let mut seen: BTreeMap<Profile, usize> = BTreeMap::new();
    for (i, p) in d.profiles().iter().enumerate() {
        let key = p.restrict(s)?;
        match seen.get(&key) {
            Some(&first) if g.choice_at(first) != g.choice_at(i) => return Ok(Some((first, i))),
            Some(_) => {}
            None => {
                seen.insert(key, i);
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{Caps, Domain, DomainSpec};
    use alloc::sync::Arc;

    fn spec(n: usize, m: usize) -> DomainSpec {
        DomainSpec::new(n, m).unwrap()
    }

    #[test]
    fn trivial_paths() {
        let sp = spec(3, 3);
        let u = sp.parse_profile("abc bca cab").unwrap();
        let path = SPath::new(AltSet::full(3), alloc::vec![u.clone()]);
        assert_eq!(path.validate(&u, &u), Ok(()));
        let built = build_spath(&u, &u, AltSet::full(3)).unwrap();
        assert_eq!(built.steps(), &[u.clone()][..]);
        assert_eq!(bfs_spath_oracle(&u, &u, AltSet::full(3), 1000).unwrap().unwrap().len(), 1);
        assert_eq!(SPath::new(AltSet::EMPTY, Vec::new()).validate(&u, &u), Err(PathViolation::Empty));
    }

    #[test]
    fn lowers_x_in_turn_when_already_top() {
        let sp = spec(3, 4);
        let u = sp.parse_profile("dabc bdca cadb").unwrap();
        let pivot = sp.parse_profile("dabc bcad cabd").unwrap();
        let d = Alternative(3);
        let path = build_spath_codim1(&u, &pivot, d).unwrap();
        let texts: Vec<_> = path.steps().iter().map(|p| sp.format_profile(p)).collect();
        assert_eq!(texts, ["dabc bdca cadb", "dabc bcad cadb", "dabc bcad cabd"]);
    }

    #[test]
    fn violations_reported() {
        let sp = spec(3, 3);
        let u = sp.parse_profile("abc bca cab").unwrap();
        let v = sp.parse_profile("acb bac cab").unwrap();
        let w = sp.parse_profile("acb bca cab").unwrap();
        let s = AltSet::full(3);
        let jump = SPath::new(AltSet::EMPTY, alloc::vec![u.clone(), v.clone()]);
        assert_eq!(jump.validate(&u, &v), Err(PathViolation::NotVariants { step: 0 }));
        let changed = SPath::new(s, alloc::vec![u.clone(), w.clone()]);
        assert_eq!(changed.validate(&u, &w), Err(PathViolation::RestrictionChanged { step: 0 }));
        assert_eq!(changed.validate(&w, &w), Err(PathViolation::WrongStart));
        assert_eq!(changed.validate(&u, &u), Err(PathViolation::WrongEnd));
        let bad = sp.parse_profile("abc abc cab").unwrap();
        let outside = SPath::new(AltSet::EMPTY, alloc::vec![u.clone(), bad.clone()]);
        assert_eq!(outside.validate(&u, &bad), Err(PathViolation::OutsideDomain { step: 1 }));
    }

    #[test]
    fn precondition_errors() {
        let sp = spec(3, 3);
        let u = sp.parse_profile("abc bca cab").unwrap();
        let v = sp.parse_profile("acb bca cab").unwrap();
        assert!(matches!(build_spath(&u, &v, AltSet::full(3)), Err(Error::Precondition(_))));
        let bad = sp.parse_profile("abc abc abc").unwrap();
        assert_eq!(build_spath(&u, &bad, AltSet::EMPTY), Err(Error::NotNonParetian));
    }

    #[test]
    fn codim1_paths_validate_at_33() {
        let sp = spec(3, 3);
        let d = Domain::non_paretian(sp, &Caps::default()).unwrap();
        for x in (0..3).map(Alternative) {
            let s = AltSet::full(3).without(x);
            for u in d.profiles() {
                for v in d.profiles().iter().filter(|v| u.agrees_on(v, s)) {
                    let path = build_spath_codim1(u, v, x).unwrap();
                    assert_eq!(path.validate(u, v), Ok(()), "{u:?} -> {v:?}");
                }
            }
        }
    }

    #[test]
    fn equivalence_on_dictators() {
        let d = Arc::new(Domain::non_paretian(spec(3, 3), &Caps::default()).unwrap());
        let g = crate::rules::dictator_rule(d.clone(), 0).unwrap();
        assert_eq!(check_equivalence(&g), Ok(None));
        let bad = Rule::from_fn(d, |p| p.order(0).bottom()).unwrap();
        assert!(matches!(check_equivalence(&bad), Err(Error::Manipulable(_))));
    }
}
