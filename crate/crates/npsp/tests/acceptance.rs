//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use npsp_core::lift::{
    case3_solver_query, check_case3, merge_report, project_clone, Case3, CloneSide, MergeSpec,
};
use npsp_core::rules::{conclusion_ubm_rule, dictator_rule, majority_superset_rule, restricted_range_lift};
use npsp_core::sat::Status;
use npsp_core::spath::{build_spath, check_equivalence, fiber_component};
use npsp_core::verify::{
    build_sp_model, decisiveness_sweep, enumerate_solutions, verify_basis, vp_range_check,
    SolveStatus,
};
use npsp_core::{AltSet, Alternative, Caps, Domain, DomainSpec, Profile, Rule};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn spec(n: usize, m: usize) -> DomainSpec {
    DomainSpec::new(n, m).unwrap()
}

fn np(n: usize, m: usize) -> Arc<Domain> {
    Arc::new(Domain::non_paretian(spec(n, m), &Caps::default()).unwrap())
}

fn set(alts: &[u8]) -> AltSet {
    alts.iter().map(|&a| Alternative(a)).collect()
}

// ---- independent oracles, working on the text form of profiles ----

fn orders(labels: &str) -> Vec<String> {
    if labels.len() <= 1 {
        return vec![labels.to_string()];
    }
    let mut out = Vec::new();
    for (k, c) in labels.chars().enumerate() {
        let rest: String = labels.chars().enumerate().filter(|&(j, _)| j != k).map(|(_, c)| c).collect();
        for tail in orders(&rest) {
            out.push(format!("{c}{tail}"));
        }
    }
    out
}

fn above(order: &str, x: char, y: char) -> bool {
    order.find(x).unwrap() < order.find(y).unwrap()
}

/// Profiles over `labels` where no alternative is ranked above another by
/// everyone.
fn np_by_definition(n: usize, labels: &str) -> BTreeSet<String> {
    let all = orders(labels);
    let mut profiles = vec![Vec::<String>::new()];
    for _ in 0..n {
        profiles = profiles
            .into_iter()
            .flat_map(|p| {
                all.iter().map(move |o| {
                    let mut q = p.clone();
                    q.push(o.clone());
                    q
                })
            })
            .collect();
    }
    profiles
        .into_iter()
        .filter(|p| {
            !labels.chars().any(|x| {
                labels.chars().any(|y| x != y && p.iter().all(|o| above(o, x, y)))
            })
        })
        .map(|p| p.join(" "))
        .collect()
}

fn restrict_text(profile: &str, s: &str) -> String {
    profile.chars().filter(|c| *c == ' ' || s.contains(*c)).collect()
}

/// Some individual gains by misreporting, with everything else fixed.
fn manipulable(g: &Rule) -> bool {
    let spec = g.spec();
    let texts: Vec<Vec<String>> = g
        .domain()
        .profiles()
        .iter()
        .map(|p| spec.format_profile(p).split(' ').map(String::from).collect())
        .collect();
    let out: Vec<char> = g.choices().iter().map(|&a| spec.label(a)).collect();
    let mut by_others: BTreeMap<(usize, Vec<String>), Vec<usize>> = BTreeMap::new();
    for (k, t) in texts.iter().enumerate() {
        for h in 0..t.len() {
            let mut others = t.clone();
            others.remove(h);
            by_others.entry((h, others)).or_default().push(k);
        }
    }
    by_others.iter().any(|((h, _), group)| {
        group.iter().any(|&p| {
            group
                .iter()
                .any(|&q| out[q] != out[p] && above(&texts[p][*h], out[q], out[p]))
        })
    })
}

/// First pair of profiles that agree on `s` but get different outcomes.
fn equivalence_oracle(g: &Rule, s: &str) -> Option<(String, String)> {
    let spec = g.spec();
    let mut seen: BTreeMap<String, (String, Alternative)> = BTreeMap::new();
    for (p, &a) in g.domain().profiles().iter().zip(g.choices()) {
        let text = spec.format_profile(p);
        let key = restrict_text(&text, s);
        match seen.get(&key) {
            Some((first, b)) if *b != a => return Some((first.clone(), text)),
            Some(_) => {}
            None => {
                seen.insert(key, (text, a));
            }
        }
    }
    None
}

fn dictator_table(g: &Rule, i: usize) -> bool {
    let spec = g.spec();
    g.domain()
        .profiles()
        .iter()
        .zip(g.choices())
        .all(|(p, &a)| spec.format_profile(p).split(' ').nth(i).unwrap().starts_with(spec.label(a)))
}

fn within(started: Instant, limit: Duration) -> Result<(), String> {
    let t = started.elapsed();
    ensure(t <= limit, || format!("took {:.1} s, limit {} s", t.as_secs_f64(), limit.as_secs()))
}

// ---- criteria ----

fn basis() -> Check {
    let started = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_npsp"))
        .args(["verify-basis", "--n", "3", "--m", "3", "--output", "json"])
        .output()
        .map_err(e2s)?;
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(e2s)?;
    ensure(out.status.code() == Some(0), || format!("exit code {:?}", out.status.code()))?;
    ensure(v["result"]["solutions"] == 3, || format!("solutions {}", v["result"]["solutions"]))?;
    ensure(v["result"]["matches_dictator_tables"] == true, || "cli: tables differ".into())?;
    within(started, Duration::from_secs(60))?;

    let report = verify_basis(spec(3, 3), &Caps::default(), 64).map_err(e2s)?;
    ensure(report.result.status == SolveStatus::Sat, || "enumeration capped".into())?;
    let sols = &report.result.solutions;
    ensure(sols.len() == 3, || format!("{} solutions", sols.len()))?;
    for i in 0..3 {
        let hits = sols.iter().filter(|g| dictator_table(g, i)).count();
        ensure(hits == 1, || format!("dictator #{} table found {hits} times", i + 1))?;
    }
    for g in sols {
        ensure(!manipulable(g), || "a solution is manipulable".into())?;
    }
    Ok(format!("3 solutions = the 3 dictator tables ({:.2} s)", started.elapsed().as_secs_f64()))
}

fn domain_counts() -> Check {
    let s = spec(3, 3);
    let lx = orders("abc").len();
    ensure(lx == 6, || format!("|L(X)| = {lx}"))?;
    ensure(s.profile_space() == 216, || format!("total {}", s.profile_space()))?;
    let full = Domain::unrestricted(s.clone(), &Caps::default()).map_err(e2s)?;
    ensure(full.len() == 216, || format!("unrestricted domain holds {}", full.len()))?;
    let d = np(3, 3);
    let oracle = np_by_definition(3, "abc");
    let got: BTreeSet<String> = d.profiles().iter().map(|p| s.format_profile(p)).collect();
    ensure(d.len() == 102 && got == oracle, || format!("|NP| = {}, oracle {}", d.len(), oracle.len()))?;
    // signed count over unanimously oriented pair sets
    let pairs = [('a', 'b'), ('a', 'c'), ('b', 'c')];
    let all = orders("abc");
    let mut ie: i64 = 0;
    for mask in 0..8u32 {
        let chosen: Vec<_> = pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, p)| *p).collect();
        let mut groups: BTreeMap<Vec<bool>, i64> = BTreeMap::new();
        for o in &all {
            *groups.entry(chosen.iter().map(|&(x, y)| above(o, x, y)).collect()).or_default() += 1;
        }
        let term: i64 = groups.values().map(|g| g.pow(3)).sum();
        ie += if chosen.len() % 2 == 0 { term } else { -term };
    }
    ensure(ie == 102, || format!("inclusion-exclusion gives {ie}"))?;
    let published: BTreeSet<&str> = [
        "abc bca cab", "abc cab bca", "acb cba bac", "acb bac cba", "bac acb cba", "bac cba acb",
        "bca cab abc", "bca abc cab", "cab abc bca", "cab bca abc", "cba bac acb", "cba acb bac",
    ]
    .into_iter()
    .collect();
    let vp = Domain::voting_paradox(s.clone(), &Caps::default()).map_err(e2s)?;
    let vp_text: Vec<String> = vp.profiles().iter().map(|p| s.format_profile(p)).collect();
    ensure(vp.len() == 12 && vp_text.iter().all(|t| published.contains(t.as_str())), || {
        format!("VP = {vp_text:?}")
    })?;
    Ok("|L(X)| 6, total 216, |NP| 102 (two oracles agree), |VP| 12 = published list".into())
}

fn spath_connectivity() -> Check {
    let started = Instant::now();
    let s33 = spec(3, 3);
    let d = np(3, 3);
    let (mut fibers, mut pairs) = (0usize, 0usize);
    for mask in 0u8..8 {
        let s: AltSet = (0..3u8).filter(|a| mask >> a & 1 == 1).map(Alternative).collect();
        let s_text = s33.format_set(s);
        let mut by_fiber: BTreeMap<String, Vec<&Profile>> = BTreeMap::new();
        for p in d.profiles() {
            by_fiber.entry(restrict_text(&s33.format_profile(p), &s_text)).or_default().push(p);
        }
        for members in by_fiber.values() {
            fibers += 1;
            let component = fiber_component(members[0], s, 10_000).map_err(e2s)?;
            let expected: Vec<Profile> = members.iter().map(|p| (*p).clone()).collect();
            ensure(component == expected, || {
                format!("S={s_text}: oracle reaches {} of {} fiber profiles", component.len(), members.len())
            })?;
            if s.len() == 1 {
                ensure(members.len() == d.len(), || format!("S={s_text}: fiber is not all of NP"))?;
            }
            for u in members {
                for v in members {
                    pairs += 1;
                    let path = build_spath(u, v, s).map_err(|e| format!("S={s_text}: {e:?}"))?;
                    path.validate(u, v).map_err(|e| {
                        format!("S={s_text} {} -> {}: {e:?}", s33.format_profile(u), s33.format_profile(v))
                    })?;
                }
            }
        }
    }
    within(started, Duration::from_secs(30))?;
    Ok(format!(
        "{fibers} fibers, {pairs} ordered pairs, 0 failures ({:.2} s)",
        started.elapsed().as_secs_f64()
    ))
}

fn conclusion_on_np(m: usize) -> Result<Rule, String> {
    conclusion_ubm_rule(np(3, m), set(&[0, 1, 2])).map_err(e2s)
}

fn equivalence() -> Check {
    let report = verify_basis(spec(3, 3), &Caps::default(), 64).map_err(e2s)?;
    for g in &report.result.solutions {
        let s = g.spec().format_set(g.range());
        ensure(check_equivalence(g).map_err(e2s)?.is_none(), || "solver solution: violation".into())?;
        ensure(equivalence_oracle(g, &s).is_none(), || "solver solution: oracle violation".into())?;
    }
    let g_star = conclusion_on_np(4)?;
    ensure(g_star.range() == set(&[0, 1, 2]), || "range is not {a,b,c}".into())?;
    ensure(check_equivalence(&g_star).map_err(e2s)?.is_none(), || "(3,4) rule: violation".into())?;
    if let Some((p, q)) = equivalence_oracle(&g_star, "abc") {
        return Err(format!("(3,4) rule: {p} and {q} agree on abc"));
    }
    Ok(format!("{} solutions at (3,3) and the (3,4) rule with S=abc: 0 violations", report.solution_count()))
}

fn majority_superset() -> Check {
    let g = majority_superset_rule(3, &Caps::default()).map_err(e2s)?;
    let d = g.domain();
    ensure(d.len() == 110, || format!("|D| = {}", d.len()))?;
    let mut expected = np_by_definition(3, "xyz");
    for a in orders("xy") {
        for b in orders("xy") {
            for c in orders("xy") {
                expected.insert(format!("z{a} z{b} z{c}"));
            }
        }
    }
    let got: BTreeSet<String> = d.profiles().iter().map(|p| g.spec().format_profile(p)).collect();
    ensure(got == expected, || format!("D differs from NP plus z-on-top ({} vs {})", got.len(), expected.len()))?;
    ensure(g.is_strategy_proof() && !manipulable(&g), || "manipulable".into())?;
    ensure(g.is_full_range(), || "range is not X".into())?;
    ensure(g.find_dictator().is_none() && (0..3).all(|i| !dictator_table(&g, i)), || "dictatorial".into())?;
    Ok("|D| 110, strategy-proof, full range, no dictator".into())
}

fn decisiveness() -> Check {
    let started = Instant::now();
    let d = np(3, 3);
    let vp = Domain::voting_paradox(spec(3, 3), &Caps::default()).map_err(e2s)?;
    let report = decisiveness_sweep(&build_sp_model(d, true), &vp).map_err(e2s)?;
    ensure(report.queries > 0 && report.unsat == report.queries, || {
        format!("{} of {} UNSAT, first SAT {:?}", report.unsat, report.queries, report.first_sat)
    })?;
    within(started, Duration::from_secs(300))?;
    Ok(format!("{}/{} UNSAT ({:.2} s)", report.unsat, report.queries, started.elapsed().as_secs_f64()))
}

fn vp_range() -> Check {
    let d = np(3, 3);
    let vp = Domain::voting_paradox(spec(3, 3), &Caps::default()).map_err(e2s)?;
    for a in 0..3u8 {
        let status = vp_range_check(d.clone(), &vp, Alternative(a), true).map_err(e2s)?;
        ensure(status == Status::Unsat, || format!("excluding {} is SAT", d.spec().label(Alternative(a))))?;
    }
    Ok("excluding a, b or c on VP: all UNSAT".into())
}

fn lifting() -> Check {
    let started = Instant::now();
    let big = np(4, 3);
    let res = enumerate_solutions(&build_sp_model(big.clone(), true), 64).map_err(e2s)?;
    ensure(res.status == SolveStatus::Sat && res.solutions.len() == 4, || {
        format!("{:?} with {} solutions", res.status, res.solutions.len())
    })?;
    let small = spec(3, 3);
    for g in &res.solutions {
        let i = g.find_dictator().ok_or("a solution at (4,3) is not dictatorial")?;
        for (side, expect) in [(CloneSide::Last, i.min(2)), (CloneSide::First, i.saturating_sub(1))] {
            let h = project_clone(g, side).map_err(e2s)?;
            ensure(!manipulable(&h), || format!("#{} {side:?} projection manipulable", i + 1))?;
            ensure(h.find_dictator() == Some(expect) && dictator_table(&h, expect), || {
                format!("#{} {side:?} projection dictated by {:?}", i + 1, h.find_dictator())
            })?;
            // rebuild the projection by duplicating an individual in text
            for (p, &a) in h.domain().profiles().iter().zip(h.choices()) {
                let t = small.format_profile(p);
                let parts: Vec<&str> = t.split(' ').collect();
                let cloned = match side {
                    CloneSide::Last => format!("{t} {}", parts[2]),
                    CloneSide::First => format!("{} {t}", parts[0]),
                };
                let q = g.spec().parse_profile(&cloned).map_err(e2s)?;
                ensure(g.evaluate(&q).map_err(e2s)? == a, || format!("projection differs at {t}"))?;
            }
        }
        ensure(!matches!(check_case3(g).map_err(e2s)?, Case3::Contradiction { .. }), || {
            "case 3 hypothesis holds".into()
        })?;
    }
    let status = case3_solver_query(big).map_err(e2s)?;
    ensure(status == Status::Unsat, || "case 3 solver query is SAT".into())?;
    Ok(format!(
        "4 dictatorships, 8 projections transported, case 3 UNSAT ({:.2} s)",
        started.elapsed().as_secs_f64()
    ))
}

fn merge() -> Check {
    let started = Instant::now();
    let d = np(3, 4);
    let mut runs = 0;
    for i in 0..3 {
        let g = dictator_rule(d.clone(), i).map_err(e2s)?;
        for w in 0..4u8 {
            for z in (0..4u8).filter(|&z| z != w) {
                let ms = MergeSpec::new(d.spec().clone(), Alternative(w), Alternative(z), '*').map_err(e2s)?;
                let r = merge_report(&g, &ms).map_err(e2s)?;
                ensure(r.well_defined && r.sp_preserved, || {
                    format!("#{} merge {w},{z}: well-defined {} SP {}", i + 1, r.well_defined, r.sp_preserved)
                })?;
                ensure(r.dictator_before == Some(i) && r.dictator_after == Some(i), || {
                    format!("#{} merge {w},{z}: dictator {:?}", i + 1, r.dictator_after)
                })?;
                runs += 1;
            }
        }
    }
    within(started, Duration::from_secs(300))?;
    Ok(format!("3 dictatorships x 12 merges: well-defined, strategy-proof, same dictator ({runs} runs)"))
}

fn ubm_chain() -> Check {
    let started = Instant::now();
    let s = set(&[0, 1, 2]);
    let full = Arc::new(Domain::unrestricted(spec(3, 4), &Caps::default()).map_err(e2s)?);
    let g = conclusion_ubm_rule(full, s).map_err(e2s)?;
    let ubm = g.ubm_violation().map_err(e2s)?;
    let on_np = g.restrict_to(np(3, 4)).map_err(e2s)?;
    let sp_range = !manipulable(&on_np) && on_np.is_strategy_proof() && on_np.range() == s;
    let lift4 = restricted_range_lift(&on_np, &[Alternative(3)], &Caps::default()).map_err(e2s)?;
    let dictatorial = lift4.find_dictator().is_some();
    // with two outside alternatives the order parameter has two values
    let g5 = conclusion_on_np(5)?;
    let (d, e) = (Alternative(3), Alternative(4));
    let lift_de = restricted_range_lift(&g5, &[d, e], &Caps::default()).map_err(e2s)?;
    let lift_ed = restricted_range_lift(&g5, &[e, d], &Caps::default()).map_err(e2s)?;
    let invariant = lift_de == lift_ed && lift_de == lift4 && lift_de.find_dictator().is_some();
    within(started, Duration::from_secs(600))?;
    let summary = format!(
        "ubm {}; SP on NP with range abc {}; lift dictatorial {} (#{}); order invariant {}",
        ubm.is_none(),
        sp_range,
        dictatorial,
        lift4.find_dictator().map_or(0, |i| i + 1),
        invariant
    );
    if let Some(v) = &ubm {
        let w = &v.manipulation;
        let spec = g.spec();
        let at = g.domain().profile(w.at_index);
        return Err(format!(
            "{summary}; #{} at {} reports {} and moves {} -> {}, harming #{}",
            w.by + 1,
            spec.format_profile(at),
            spec.format_profile(&w.via),
            spec.label(w.sincere_outcome),
            spec.label(w.manipulated_outcome),
            v.harmed + 1
        ));
    }
    ensure(sp_range && dictatorial && invariant, || summary.clone())?;
    Ok(summary)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("basis: full-range SP rules on NP(3,3) are the dictators", basis),
        ("domain counts", domain_counts),
        ("S-path connectivity on NP(3,3)", spath_connectivity),
        ("equivalence on fibers", equivalence),
        ("majority-superset rule", majority_superset),
        ("decisiveness sweep", decisiveness),
        ("VP range", vp_range),
        ("lifting from (4,3)", lifting),
        ("merging on NP(3,4)", merge),
        ("UBM chain at (3,4)", ubm_chain),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{}] {name}: {detail}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
