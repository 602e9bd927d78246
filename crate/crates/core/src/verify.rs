//! Constraint models of strategy-proof rules and the queries that check the
//! three-individual, three-alternative basis case exhaustively.
//!
//! Variable `x[p, a]` is true when the rule selects alternative `a` at the
//! domain profile with index `p`. A model holds
//!
//! * one exactly-one group per profile (an at-least-one clause plus pairwise
//!   at-most-one clauses),
//! * for every ordered pair of `h`-variants `(p, q)` and every pair `b ≻ a`
//!   in `p(h)`, the clause `¬x[p, a] ∨ ¬x[q, b]`,
//! * optionally, for every alternative `a`, the range clause `⋁_p x[p, a]`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::domain::{Caps, Domain, DomainSpec};
use crate::order::Alternative;
use crate::profile::Profile;
use crate::rules::{dictator_rule, Rule};
use crate::sat::{satisfies, Lit, Solver, Stats, Status, Var};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct ConstraintModel {
    domain: Arc<Domain>,
    clauses: Vec<Vec<Lit>>,
    exactly_one_groups: usize,
    sp_clauses: usize,
    full_range: bool,
}

impl ConstraintModel {
    pub fn domain(&self) -> &Arc<Domain> {
        &self.domain
    }

    pub fn num_vars(&self) -> usize {
        self.domain.len() * self.domain.m()
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    pub fn exactly_one_groups(&self) -> usize {
        self.exactly_one_groups
    }

    pub fn sp_clause_count(&self) -> usize {
        self.sp_clauses
    }

    pub fn is_full_range(&self) -> bool {
        self.full_range
    }

    pub fn var(&self, p: usize, a: Alternative) -> Var {
        Var((p * self.domain.m() + a.index()) as u32)
    }

    /// Inverse of [`ConstraintModel::var`].
    pub fn var_meaning(&self, v: Var) -> (usize, Alternative) {
        let m = self.domain.m();
        (v.index() / m, Alternative((v.index() % m) as u8))
    }

    pub fn add_clause(&mut self, clause: Vec<Lit>) {
        self.clauses.push(clause);
    }

    /// Demands `g(p) = a`.
    pub fn require(&mut self, p: usize, a: Alternative) {
        let v = self.var(p, a);
        self.clauses.push(alloc::vec![Lit::pos(v)]);
    }

    /// Demands `g(p) ≠ a`.
    pub fn forbid(&mut self, p: usize, a: Alternative) {
        let v = self.var(p, a);
        self.clauses.push(alloc::vec![Lit::neg(v)]);
    }

    pub fn solver(&self) -> Solver {
        let mut solver = Solver::new(self.num_vars());
        for c in &self.clauses {
            if !solver.add_clause(c) {
                break;
            }
        }
        solver
    }

    /// Reads the rule encoded by a satisfying assignment.
    pub fn decode(&self, model: &[bool]) -> Result<Rule> {
        let m = self.domain.m();
        let choice = (0..self.domain.len())
            .map(|p| {
                (0..m)
                    .map(|a| Alternative(a as u8))
                    .find(|&a| model[self.var(p, a).index()])
                    .ok_or_else(|| Error::SolverUnsound(format!("profile {p} has no outcome")))
            })
            .collect::<Result<Vec<_>>>()?;
        Rule::new(self.domain.clone(), choice)
    }

    /// Re-checks a decoded rule against the clauses and, independently of
    /// the encoding, with the rules-module predicates.
    fn validate(&self, model: &[bool], rule: &Rule) -> Result<()> {
        if !satisfies(&self.clauses, model) {
            return Err(Error::SolverUnsound("model violates a clause".into()));
        }
        if let Some(w) = rule.find_manipulation() {
            return Err(Error::SolverUnsound(format!(
                "solution is manipulable by individual {} at profile {}",
                w.by + 1,
                w.at_index
            )));
        }
        if self.full_range && !rule.is_full_range() {
            return Err(Error::SolverUnsound("solution misses part of the range".into()));
        }
        Ok(())
    }
}

/// Builds the strategy-proofness model over `domain`, with the full-range
/// clauses when `full_range` is set.
pub fn build_sp_model(domain: Arc<Domain>, full_range: bool) -> ConstraintModel {
    let m = domain.m();
    let var = |p: usize, a: usize| Var((p * m + a) as u32);
    let mut clauses = Vec::new();
    for p in 0..domain.len() {
        clauses.push((0..m).map(|a| Lit::pos(var(p, a))).collect());
        for a in 0..m {
            for b in a + 1..m {
                clauses.push(alloc::vec![Lit::neg(var(p, a)), Lit::neg(var(p, b))]);
            }
        }
    }
    let mut sp: BTreeSet<[Lit; 2]> = BTreeSet::new();
    for p in 0..domain.len() {
        for (h, q) in domain.variants(p) {
            let order = domain.profile(p).order(h);
            for hi in 0..m {
                for lo in hi + 1..m {
                    // order ranks `b` above `a`
                    let (b, a) = (order.at(hi).index(), order.at(lo).index());
                    let mut clause = [Lit::neg(var(p, a)), Lit::neg(var(q, b))];
                    clause.sort_unstable();
                    sp.insert(clause);
                }
            }
        }
    }
    let sp_clauses = sp.len();
    clauses.extend(sp.into_iter().map(|c| c.to_vec()));
    if full_range {
        for a in 0..m {
            clauses.push((0..domain.len()).map(|p| Lit::pos(var(p, a))).collect());
        }
    }
    ConstraintModel {
        exactly_one_groups: domain.len(),
        domain,
        clauses,
        sp_clauses,
        full_range,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Sat,
    Unsat,
    /// The solution cap was reached and more solutions exist.
    Capped,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub solutions: Vec<Rule>,
    pub stats: Stats,
}

/// Enumerates up to `cap` solutions with blocking clauses. Every solution
/// is re-validated before it is returned.
pub fn enumerate_solutions(model: &ConstraintModel, cap: usize) -> Result<SolveResult> {
    if cap == 0 {
        return Err(Error::Precondition("the solution cap must be at least 1".into()));
    }
    let mut solver = model.solver();
    let mut solutions = Vec::new();
    let status = loop {
        if solver.solve() == Status::Unsat {
            break if solutions.is_empty() {
                SolveStatus::Unsat
            } else {
                SolveStatus::Sat
            };
        }
        if solutions.len() == cap {
            break SolveStatus::Capped;
        }
        let assignment = solver.model();
        let rule = model.decode(&assignment)?;
        model.validate(&assignment, &rule)?;
        let block: Vec<Lit> = rule
            .choices()
            .iter()
            .enumerate()
            .map(|(p, &a)| Lit::neg(model.var(p, a)))
            .collect();
        solutions.push(rule);
        solver.add_clause(&block);
    };
    Ok(SolveResult {
        status,
        solutions,
        stats: solver.stats(),
    })
}

/// Satisfiability of a model without enumerating.
pub fn solve_status(model: &ConstraintModel) -> Status {
    model.solver().solve()
}

#[derive(Debug, Clone)]
pub struct BasisReport {
    pub result: SolveResult,
    /// Dictator of each solution, in solution order.
    pub dictators: Vec<Option<usize>>,
    /// Dictator of each solution restricted to the voting-paradox profiles,
    /// when those are defined for the spec.
    pub vp_dictators: Option<Vec<Option<usize>>>,
}

impl BasisReport {
    pub fn solution_count(&self) -> usize {
        self.result.solutions.len()
    }

    pub fn all_dictatorial(&self) -> bool {
        self.dictators.iter().all(Option::is_some)
    }

    /// Whether the solutions are exactly the `n` dictator tables.
    pub fn matches_dictator_tables(&self) -> Result<bool> {
        let domain = match self.result.solutions.first() {
            Some(g) => g.domain().clone(),
            None => return Ok(false),
        };
        let mut expected = (0..domain.n())
            .map(|i| dictator_rule(domain.clone(), i))
            .collect::<Result<Vec<_>>>()?;
        let mut found = self.result.solutions.clone();
        let key = |g: &Rule| g.choices().to_vec();
        expected.sort_by_key(key);
        found.sort_by_key(key);
        Ok(self.result.status == SolveStatus::Sat && expected == found)
    }

    /// Each solution restricted to the voting-paradox profiles is dictated
    /// by the same individual as on the whole domain.
    pub fn vp_consistent(&self) -> Option<bool> {
        self.vp_dictators
            .as_ref()
            .map(|vp| vp.iter().zip(&self.dictators).all(|(a, b)| a.is_some() && a == b))
    }

    pub fn passed(&self) -> Result<bool> {
        Ok(self.all_dictatorial()
            && self.matches_dictator_tables()?
            && self.vp_consistent().unwrap_or(true))
    }
}

/// Enumerates every full-range strategy-proof rule on `NP(n, m)`.
pub fn verify_basis(spec: DomainSpec, caps: &Caps, cap: usize) -> Result<BasisReport> {
    let np = Arc::new(Domain::non_paretian(spec.clone(), caps)?);
    let model = build_sp_model(np, true);
    let result = enumerate_solutions(&model, cap)?;
    let dictators = result.solutions.iter().map(Rule::find_dictator).collect();
    let vp_dictators = if spec.n() % 2 == 1 {
        let vp = Arc::new(Domain::voting_paradox(spec, caps)?);
        Some(
            result
                .solutions
                .iter()
                .map(|g| g.restrict_to(vp.clone()).map(|r| r.find_dictator()))
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };
    Ok(BasisReport {
        result,
        dictators,
        vp_dictators,
    })
}

/// Checks one instance of the decisiveness claim: if the rule picks
/// `α = top(seed(voter))` at the voting-paradox profile `seed`, it never
/// picks `β = bottom(seed(voter))` at `target`, where `voter` ranks `α`
/// above `β`. `Unsat` confirms the claim for this target.
pub fn decisiveness_query(
    base: &ConstraintModel,
    vp: &Domain,
    seed: &Profile,
    voter: usize,
    target: &Profile,
) -> Result<Status> {
    let (u, v) = decisiveness_indices(base, vp, seed, voter, target)?;
    let mut solver = base.solver();
    Ok(run_decisiveness(&mut solver, base, u, v))
}

fn decisiveness_indices(
    base: &ConstraintModel,
    vp: &Domain,
    seed: &Profile,
    voter: usize,
    target: &Profile,
) -> Result<(DecisiveSeed, usize)> {
    if !vp.contains(seed) {
        return Err(Error::Precondition("the seed is not a voting-paradox profile".into()));
    }
    if voter >= seed.n() {
        return Err(Error::Precondition(format!("individual {} does not exist", voter + 1)));
    }
    let d = base.domain();
    let u = d.index_of(seed).ok_or(Error::NotInDomain)?;
    let v = d.index_of(target).ok_or(Error::NotInDomain)?;
    let (alpha, beta) = (seed.order(voter).top(), seed.order(voter).bottom());
    if !target.order(voter).prefers(alpha, beta) {
        return Err(Error::Precondition(
            "the target does not rank α above β for the voter".into(),
        ));
    }
    Ok((DecisiveSeed { index: u, alpha, beta }, v))
}

#[derive(Debug, Clone, Copy)]
struct DecisiveSeed {
    index: usize,
    alpha: Alternative,
    beta: Alternative,
}

fn run_decisiveness(solver: &mut Solver, base: &ConstraintModel, u: DecisiveSeed, v: usize) -> Status {
    solver.add_clause(&[Lit::pos(base.var(u.index, u.alpha))]);
    solver.add_clause(&[Lit::pos(base.var(v, u.beta))]);
    solver.solve()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub queries: usize,
    pub unsat: usize,
    /// `(seed index, voter, target index)` of the first satisfiable query,
    /// indices into the non-Paretian domain.
    pub first_sat: Option<(usize, usize, usize)>,
}

/// Runs [`decisiveness_query`] for every seed in `vp`, every individual and
/// every target of the model's domain meeting the hypothesis.
pub fn decisiveness_sweep(base: &ConstraintModel, vp: &Domain) -> Result<SweepReport> {
    let d = base.domain();
    let prepared = base.solver();
    let mut report = SweepReport {
        queries: 0,
        unsat: 0,
        first_sat: None,
    };
    for seed in vp.profiles() {
        for voter in 0..seed.n() {
            let (alpha, beta) = (seed.order(voter).top(), seed.order(voter).bottom());
            for (v, target) in d.profiles().iter().enumerate() {
                if !target.order(voter).prefers(alpha, beta) {
                    continue;
                }
                let (u, v2) = decisiveness_indices(base, vp, seed, voter, target)?;
                debug_assert_eq!(v, v2);
                let mut solver = prepared.clone();
                report.queries += 1;
                match run_decisiveness(&mut solver, base, u, v) {
                    Status::Unsat => report.unsat += 1,
                    Status::Sat => {
                        report.first_sat.get_or_insert((u.index, voter, v));
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Full-range strategy-proof rules on `NP(n, m)` that never pick `excluded`
/// at a voting-paradox profile. `Unsat` means none exist.
pub fn vp_range_check(np: Arc<Domain>, vp: &Domain, excluded: Alternative, full_range: bool) -> Result<Status> {
    if np.spec() != vp.spec() {
        return Err(Error::SpecMismatch);
    }
    let mut model = build_sp_model(np.clone(), full_range);
    for p in vp.profiles() {
        let i = np.index_of(p).ok_or(Error::NotInDomain)?;
        model.forbid(i, excluded);
    }
    Ok(solve_status(&model))
}
