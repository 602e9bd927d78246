//! Induction-step constructions: cloning an individual to move between `n`
//! and `n + 1` individuals, and merging two alternatives into one to move
//! between `m + 1` and `m` alternatives.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::domain::{Caps, Domain, DomainKind, DomainSpec};
use crate::order::{Alternative, LinearOrder, MAX_ALTERNATIVES};
use crate::profile::Profile;
use crate::rules::Rule;
use crate::sat::Status;
use crate::verify::{build_sp_model, solve_status};
use crate::{Error, Result};

/// Which individual of the larger profile is the copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CloneSide {
    /// `(p(1), ..., p(n), p(n))`
    Last,
    /// `(p(1), p(1), ..., p(n))`
    First,
}

/// Duplicates one individual of a non-Paretian profile.
pub fn clone_profile(p: &Profile, which: CloneSide) -> Result<Profile> {
    if !p.is_non_paretian() {
        return Err(Error::NotNonParetian);
    }
    let mut orders = p.orders().to_vec();
    match which {
        CloneSide::Last => orders.push(*p.order(p.n() - 1)),
        CloneSide::First => orders.insert(0, *p.order(0)),
    }
    Profile::new(orders)
}

pub fn clone_last(p: &Profile) -> Result<Profile> {
    clone_profile(p, CloneSide::Last)
}

pub fn clone_first(p: &Profile) -> Result<Profile> {
    clone_profile(p, CloneSide::First)
}

// Smaller domains never exceed the caps that admitted the larger one.
fn caps_for(spec: &DomainSpec) -> Caps {
    Caps {
        max_alternatives: MAX_ALTERNATIVES,
        max_profiles: spec.profile_space(),
    }
}

fn require_np(g: &Rule) -> Result<()> {
    match g.domain().kind() {
        DomainKind::NonParetian => Ok(()),
        _ => Err(Error::Precondition("the rule must be defined on a non-Paretian domain".into())),
    }
}

/// The rule on `NP(n, m)` obtained by evaluating `g` at cloned profiles.
pub fn project_clone(g: &Rule, which: CloneSide) -> Result<Rule> {
    require_np(g)?;
    g.require_strategy_proof()?;
    let big = g.spec();
    if big.n() < 2 {
        return Err(Error::Precondition("cloning needs at least two individuals".into()));
    }
    let spec = DomainSpec::with_labels(big.n() - 1, big.labels().to_vec())?;
    let small = Arc::new(Domain::non_paretian(spec, &caps_for(big))?);
    let choice = small
        .profiles()
        .iter()
        .map(|p| g.evaluate(&clone_profile(p, which)?))
        .collect::<Result<Vec<_>>>()?;
    Rule::new(small, choice)
}

/// Outcome of the check that the two clone projections cannot be dictated
/// by the last and the first individual at once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Case3 {
    /// The hypothesis fails, reported with the dictators that were found.
    Vacuous {
        last: Option<usize>,
        first: Option<usize>,
    },
    /// The hypothesis holds; the two projections demand different outcomes
    /// at `u`, where `g` has a single value.
    Contradiction {
        u: Profile,
        outcome: Alternative,
        demanded_by_last: Alternative,
        demanded_by_first: Alternative,
    },
}

impl Case3 {
    pub fn is_vacuous(&self) -> bool {
        matches!(self, Case3::Vacuous { .. })
    }
}

/// `u(1) = u(2) = xy..z`, `u(n) = u(n + 1) = z..yx`, every other individual
/// like the first.
pub fn case3_profile(spec: &DomainSpec) -> Result<Profile> {
    let n = spec.n();
    if n < 4 {
        return Err(Error::Precondition("the profile needs at least four individuals".into()));
    }
    let up = LinearOrder::identity(spec.m());
    let down = up.inverse();
    Profile::new((0..n).map(|i| if i + 2 >= n { down } else { up }).collect())
}

pub fn check_case3(g: &Rule) -> Result<Case3> {
    let last = project_clone(g, CloneSide::Last)?.find_dictator();
    let first = project_clone(g, CloneSide::First)?.find_dictator();
    let n = g.spec().n() - 1;
    if last != Some(n - 1) || first != Some(0) {
        return Ok(Case3::Vacuous { last, first });
    }
    let u = case3_profile(g.spec())?;
    Ok(Case3::Contradiction {
        outcome: g.evaluate(&u)?,
        demanded_by_last: u.order(n).top(),
        demanded_by_first: u.order(0).top(),
        u,
    })
}

/// Asks the solver for a full-range strategy-proof rule on `big` whose last
/// projection is dictated by the last individual and whose first projection
/// is dictated by the first. `Unsat` means there is none.
pub fn case3_solver_query(big: Arc<Domain>) -> Result<Status> {
    if big.kind() != DomainKind::NonParetian {
        return Err(Error::Precondition("the domain must be non-Paretian".into()));
    }
    let spec = DomainSpec::with_labels(big.n() - 1, big.spec().labels().to_vec())?;
    let small = Domain::non_paretian(spec, &caps_for(big.spec()))?;
    let mut model = build_sp_model(big.clone(), true);
    for p in small.profiles() {
        let last = big.index_of(&clone_last(p)?).ok_or(Error::NotInDomain)?;
        model.require(last, p.order(p.n() - 1).top());
        let first = big.index_of(&clone_first(p)?).ok_or(Error::NotInDomain)?;
        model.require(first, p.order(0).top());
    }
    Ok(solve_status(&model))
}

/// Merging of two alternatives `w`, `z` of the larger spec into a fresh
/// alternative `x*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeSpec {
    w: Alternative,
    z: Alternative,
    x_star: Alternative,
    big: DomainSpec,
    small: DomainSpec,
    small_to_big: Vec<Option<Alternative>>,
    big_to_small: Vec<Alternative>,
}

impl MergeSpec {
    /// The small alphabet lists the remaining alternatives in their order in
    /// `big`, with `x*` in the slot of whichever of `w`, `z` comes first.
    pub fn new(big: DomainSpec, w: Alternative, z: Alternative, x_star_label: char) -> Result<MergeSpec> {
        if w == z {
            return Err(Error::SameAlternative);
        }
        if w.index() >= big.m() || z.index() >= big.m() {
            return Err(Error::InvalidSpec("merged alternative outside the spec".into()));
        }
        if big.alternative(x_star_label).is_some() {
            return Err(Error::InvalidSpec(format!("label {x_star_label:?} is already in use")));
        }
        let (first, second) = if w < z { (w, z) } else { (z, w) };
        let mut labels = Vec::new();
        let mut small_to_big = Vec::new();
        let mut big_to_small = Vec::new();
        let mut x_star = Alternative(0);
        for a in 0..big.m() {
            let a = Alternative(a as u8);
            if a == second {
                big_to_small.push(x_star);
                continue;
            }
            let k = Alternative(labels.len() as u8);
            big_to_small.push(k);
            if a == first {
                x_star = k;
                labels.push(x_star_label);
                small_to_big.push(None);
            } else {
                labels.push(big.label(a));
                small_to_big.push(Some(a));
            }
        }
        let small = DomainSpec::with_labels(big.n(), labels)?;
        Ok(MergeSpec {
            w,
            z,
            x_star,
            big,
            small,
            small_to_big,
            big_to_small,
        })
    }

    /// Parses `"w,z=x*"` against the labels of `big`.
    pub fn parse(big: DomainSpec, text: &str) -> Result<MergeSpec> {
        let bad = || Error::InvalidSpec(format!("merge {text:?} is not of the form w,z=x"));
        let (pair, star) = text.split_once('=').ok_or_else(bad)?;
        let (w, z) = pair.split_once(',').ok_or_else(bad)?;
        let single = |s: &str| {
            let mut chars = s.trim().chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => Ok(c),
                _ => Err(bad()),
            }
        };
        let lookup = |c: char| {
            big.alternative(c)
                .ok_or_else(|| Error::InvalidSpec(format!("unknown alternative {c:?}")))
        };
        let (w, z) = (lookup(single(w)?)?, lookup(single(z)?)?);
        let star = single(star)?;
        MergeSpec::new(big, w, z, star)
    }

    pub fn w(&self) -> Alternative {
        self.w
    }

    pub fn z(&self) -> Alternative {
        self.z
    }

    /// `x*` as an alternative of the small spec.
    pub fn x_star(&self) -> Alternative {
        self.x_star
    }

    pub fn big_spec(&self) -> &DomainSpec {
        &self.big
    }

    pub fn small_spec(&self) -> &DomainSpec {
        &self.small
    }

    /// The alternative of the big spec behind a small one; `None` for `x*`.
    pub fn to_big(&self, a: Alternative) -> Option<Alternative> {
        self.small_to_big[a.index()]
    }

    /// `w` and `z` map to `x*`, everything else to itself.
    pub fn to_small(&self, a: Alternative) -> Alternative {
        self.big_to_small[a.index()]
    }

    fn expand(&self, order: &LinearOrder, w_above_z: bool) -> Result<LinearOrder> {
        let pair = if w_above_z { [self.w, self.z] } else { [self.z, self.w] };
        let mut ranks = Vec::with_capacity(self.big.m());
        for a in order.alternatives() {
            match self.to_big(a) {
                Some(b) => ranks.push(b),
                None => ranks.extend_from_slice(&pair),
            }
        }
        LinearOrder::new(&ranks)
    }

    /// Expands `x*` into the adjacent pair; bit `i` of `mask` puts `w` above
    /// `z` for individual `i`.
    pub fn expand_profile(&self, p: &Profile, mask: u32) -> Result<Profile> {
        if p.n() != self.small.n() || p.m() != self.small.m() {
            return Err(Error::SpecMismatch);
        }
        let orders = p
            .orders()
            .iter()
            .enumerate()
            .map(|(i, o)| self.expand(o, mask >> i & 1 == 1))
            .collect::<Result<Vec<_>>>()?;
        Profile::new(orders)
    }

    /// Whether `r` over the big alphabet represents `p` over the small one:
    /// `w`, `z` adjacent everywhere, the two agree off the merged pair, and
    /// the alternatives above `w` in `r(i)` are those above `x*` in `p(i)`.
    pub fn represents(&self, r: &Profile, p: &Profile) -> bool {
        if r.n() != p.n() || r.m() != self.big.m() || p.m() != self.small.m() {
            return false;
        }
        r.orders().iter().zip(p.orders()).all(|(ro, po)| {
            let (pw, pz) = (ro.position(self.w), ro.position(self.z));
            let adjacent = matches!((pw, pz), (Some(a), Some(b)) if a.abs_diff(b) == 1);
            let rest: Vec<Alternative> = ro
                .alternatives()
                .filter(|&a| a != self.w && a != self.z)
                .collect();
            let small_rest: Vec<Alternative> = po.alternatives().filter_map(|a| self.to_big(a)).collect();
            let above_w: Vec<Alternative> = ro
                .alternatives()
                .take_while(|&a| a != self.w)
                .filter(|&a| a != self.z)
                .collect();
            let above_star: Vec<Alternative> = po
                .alternatives()
                .take_while(|&a| a != self.x_star)
                .filter_map(|a| self.to_big(a))
                .collect();
            adjacent && rest == small_rest && above_w == above_star
        })
    }
}

fn require_small_np(p: &Profile, ms: &MergeSpec) -> Result<()> {
    if p.n() != ms.small.n() || p.m() != ms.small.m() {
        return Err(Error::SpecMismatch);
    }
    if !p.is_non_paretian() {
        return Err(Error::NotNonParetian);
    }
    Ok(())
}

/// The fixed representative: individual 1 ranks `w` just above `z`, every
/// other individual ranks `z` just above `w`.
pub fn merge_representative(p: &Profile, ms: &MergeSpec) -> Result<Profile> {
    require_small_np(p, ms)?;
    let r = ms.expand_profile(p, 1)?;
    if !r.is_non_paretian() {
        return Err(Error::Construction("representative is Paretian".into()));
    }
    Ok(r)
}

/// Every non-Paretian representative of `p`, one per orientation of the
/// merged pair, in mask order.
pub fn all_representatives(p: &Profile, ms: &MergeSpec) -> Result<Vec<Profile>> {
    require_small_np(p, ms)?;
    let mut out = Vec::new();
    for mask in 0..1u32 << p.n() {
        let r = ms.expand_profile(p, mask)?;
        if r.is_non_paretian() {
            out.push(r);
        }
    }
    Ok(out)
}

fn small_domain(ms: &MergeSpec) -> Result<Arc<Domain>> {
    Ok(Arc::new(Domain::non_paretian(ms.small.clone(), &caps_for(&ms.big))?))
}

fn require_merge_input(g: &Rule, ms: &MergeSpec) -> Result<()> {
    if g.spec() != &ms.big {
        return Err(Error::SpecMismatch);
    }
    require_np(g)?;
    g.require_strategy_proof()
}

/// The rule on the small domain: `g` at the representative, with `w` and
/// `z` read as `x*`.
pub fn project_merge(g: &Rule, ms: &MergeSpec) -> Result<Rule> {
    require_merge_input(g, ms)?;
    let small = small_domain(ms)?;
    let choice = small
        .profiles()
        .iter()
        .map(|p| Ok(ms.to_small(g.evaluate(&merge_representative(p, ms)?)?)))
        .collect::<Result<Vec<_>>>()?;
    Rule::new(small, choice)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeWitness {
    pub profile: Profile,
    pub first: Profile,
    pub second: Profile,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WellDefinedness {
    pub profiles_checked: usize,
    pub representatives_checked: usize,
    pub witness: Option<MergeWitness>,
}

impl WellDefinedness {
    pub fn is_well_defined(&self) -> bool {
        self.witness.is_none()
    }
}

/// Evaluates `g` at every representative of every small profile and checks
/// that the collapsed outcome never depends on the representative.
pub fn check_merge_well_defined(g: &Rule, ms: &MergeSpec) -> Result<WellDefinedness> {
    require_merge_input(g, ms)?;
    let small = small_domain(ms)?;
    let mut report = WellDefinedness {
        profiles_checked: 0,
        representatives_checked: 0,
        witness: None,
    };
    for p in small.profiles() {
        report.profiles_checked += 1;
        let reps = all_representatives(p, ms)?;
        let mut seen: Option<(Alternative, &Profile)> = None;
        for r in &reps {
            report.representatives_checked += 1;
            let value = ms.to_small(g.evaluate(r)?);
            match seen {
                None => seen = Some((value, r)),
                Some((v, first)) if v != value => {
                    report.witness = Some(MergeWitness {
                        profile: p.clone(),
                        first: first.clone(),
                        second: r.clone(),
                    });
                    return Ok(report);
                }
                Some(_) => {}
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeReport {
    pub well_defined: bool,
    pub sp_preserved: bool,
    pub range_preserved: bool,
    pub dictator_before: Option<usize>,
    pub dictator_after: Option<usize>,
    pub witness: Option<MergeWitness>,
}

pub fn merge_report(g: &Rule, ms: &MergeSpec) -> Result<MergeReport> {
    let wd = check_merge_well_defined(g, ms)?;
    let projected = project_merge(g, ms)?;
    Ok(MergeReport {
        well_defined: wd.is_well_defined(),
        sp_preserved: projected.is_strategy_proof(),
        range_preserved: !g.is_full_range() || projected.is_full_range(),
        dictator_before: g.find_dictator(),
        dictator_after: projected.find_dictator(),
        witness: wd.witness,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PinnacleReport {
    pub x: Alternative,
    pub voter: usize,
    /// A profile with `x` on top for the voter and at the bottom for
    /// everyone else, where `g` selects `x`.
    pub pinnacle: Option<Profile>,
    /// A profile with `x` on top for the voter where `g` does not select `x`.
    pub top_violation: Option<(Profile, Alternative)>,
}

impl PinnacleReport {
    pub fn passed(&self) -> bool {
        self.pinnacle.is_some() && self.top_violation.is_none()
    }
}

pub fn pinnacle_and_top_checks(g: &Rule, x: Alternative, voter: usize) -> Result<PinnacleReport> {
    if voter >= g.spec().n() {
        return Err(Error::Precondition(format!("individual {} does not exist", voter + 1)));
    }
    if x.index() >= g.spec().m() {
        return Err(Error::Precondition("alternative outside the spec".into()));
    }
    g.require_strategy_proof()?;
    if !g.is_full_range() {
        return Err(Error::Precondition("the rule must have full range".into()));
    }
    let mut report = PinnacleReport {
        x,
        voter,
        pinnacle: None,
        top_violation: None,
    };
    for (i, p) in g.domain().profiles().iter().enumerate() {
        if p.order(voter).top() != x {
            continue;
        }
        let outcome = g.choice_at(i);
        if outcome != x && report.top_violation.is_none() {
            report.top_violation = Some((p.clone(), outcome));
        }
        let pinned = (0..p.n()).all(|j| j == voter || p.order(j).bottom() == x);
        if pinned && outcome == x && report.pinnacle.is_none() {
            report.pinnacle = Some(p.clone());
        }
    }
    Ok(report)
}
