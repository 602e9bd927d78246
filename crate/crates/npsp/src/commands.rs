//! The batch commands behind the CLI. Each returns an [`Outcome`]: a JSON
//! result, whether every property it asserts holds, and optional text that
//! is only shown in text mode.

use std::collections::BTreeMap;
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use npsp_core::lift::{
    case3_solver_query, check_case3, merge_report, project_clone, Case3, CloneSide, MergeSpec,
};
use npsp_core::order::all_orderings;
use npsp_core::rules::{
    conclusion_ubm_rule, dictator_rule, majority_superset_rule, restricted_range_lift,
};
use npsp_core::sat::{Stats, Status};
use npsp_core::spath::{bfs_spath_oracle, build_spath, check_equivalence, fiber_component};
use npsp_core::verify::{
    build_sp_model, decisiveness_sweep, enumerate_solutions, verify_basis, vp_range_check,
    SolveStatus,
};
use npsp_core::{
    AltSet, Alternative, Caps, Domain, DomainKind, DomainSpec, ManipulationWitness, Profile, Rule,
};

use crate::error::{Error, Result};
use crate::formats;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

/// Settings shared by every command.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub labels: Option<String>,
    pub caps: Caps,
    pub cap: usize,
    pub seed: u64,
    pub output: OutputFormat,
    pub stretch: bool,
    pub merge: Option<String>,
    pub rule_file: Option<PathBuf>,
    pub cnf_out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: None,
            m: None,
            labels: None,
            caps: Caps::default(),
            cap: 64,
            seed: 0,
            output: OutputFormat::Text,
            stretch: false,
            merge: None,
            rule_file: None,
            cnf_out: None,
        }
    }
}

impl RunConfig {
    /// The spec from `--n`, `--m` and `--labels`, falling back to the given
    /// defaults.
    pub fn spec_or(&self, n: usize, m: usize) -> Result<DomainSpec> {
        let n = self.n.unwrap_or(n);
        match &self.labels {
            Some(labels) => {
                let labels: Vec<char> = labels.chars().collect();
                if let Some(m) = self.m {
                    if m != labels.len() {
                        return Err(Error::Usage(format!(
                            "--labels has {} labels but --m is {m}",
                            labels.len()
                        )));
                    }
                }
                Ok(DomainSpec::with_labels(n, labels)?)
            }
            None => Ok(DomainSpec::new(n, self.m.unwrap_or(m))?),
        }
    }

    pub fn spec(&self) -> Result<DomainSpec> {
        self.spec_or(3, 3)
    }

    /// Solver runs beyond the three-by-three base case are opt-in.
    fn require_stretch(&self, spec: &DomainSpec) -> Result<()> {
        if (spec.n(), spec.m()) != (3, 3) && !self.stretch {
            return Err(Error::Usage(format!(
                "solving at n={} m={} needs --stretch",
                spec.n(),
                spec.m()
            )));
        }
        Ok(())
    }

    fn rule_file(&self) -> Result<&Path> {
        self.rule_file
            .as_deref()
            .ok_or_else(|| Error::Usage("this command needs --rule-file".into()))
    }

    fn echo(&self) -> Value {
        json!({
            "n": self.n,
            "m": self.m,
            "labels": self.labels,
            "cap": self.cap,
            "seed": self.seed,
            "stretch": self.stretch,
            "merge": self.merge,
            "rule_file": self.rule_file.as_ref().map(|p| p.display().to_string()),
            "cnf_out": self.cnf_out.as_ref().map(|p| p.display().to_string()),
            "max_profiles": self.caps.max_profiles,
            "max_alternatives": self.caps.max_alternatives,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub passed: bool,
    pub result: Value,
    /// Extra lines for text mode, such as timings; never part of the JSON.
    pub notes: Vec<String>,
    /// A file-format dump printed after the report in text mode.
    pub artifact: Option<String>,
}

impl Outcome {
    fn new(passed: bool, result: Value) -> Outcome {
        Outcome {
            passed,
            result,
            notes: Vec::new(),
            artifact: None,
        }
    }

    fn note(mut self, line: String) -> Outcome {
        self.notes.push(line);
        self
    }
}

/// The self-describing JSON report.
pub fn report(command: &str, cfg: &RunConfig, outcome: &Outcome) -> Value {
    json!({
        "tool": "npsp",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": cfg.echo(),
        "passed": outcome.passed,
        "result": outcome.result,
    })
}

/// Renders an outcome for stdout.
pub fn render(command: &str, cfg: &RunConfig, outcome: &Outcome) -> String {
    match cfg.output {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&report(command, cfg, outcome))
                .expect("reports serialize");
            s.push('\n');
            s
        }
        OutputFormat::Text => {
            let mut s = format!("{command}: {}\n", if outcome.passed { "PASS" } else { "FAIL" });
            if let Value::Object(map) = &outcome.result {
                for (k, v) in map {
                    let v = match v {
                        Value::String(t) => t.clone(),
                        other => other.to_string(),
                    };
                    s.push_str(&format!("  {k}: {v}\n"));
                }
            }
            for note in &outcome.notes {
                s.push_str(&format!("  {note}\n"));
            }
            if let Some(a) = &outcome.artifact {
                s.push_str(a);
            }
            s
        }
    }
}

fn labels_of(spec: &DomainSpec, set: AltSet) -> String {
    spec.format_set(set)
}

fn individual(i: Option<usize>) -> Value {
    json!(i.map(|i| i + 1))
}

fn stats_json(stats: &Stats) -> Value {
    json!({
        "decisions": stats.decisions,
        "propagations": stats.propagations,
        "conflicts": stats.conflicts,
        "learned": stats.learned,
    })
}

fn status_str(s: Status) -> &'static str {
    match s {
        Status::Sat => "sat",
        Status::Unsat => "unsat",
    }
}

fn solve_status_str(s: SolveStatus) -> &'static str {
    match s {
        SolveStatus::Sat => "sat",
        SolveStatus::Unsat => "unsat",
        SolveStatus::Capped => "capped",
    }
}

pub fn witness_json(rule: &Rule, w: &ManipulationWitness) -> Value {
    let spec = rule.spec();
    json!({
        "profile": spec.format_profile(&w.at),
        "individual": w.by + 1,
        "reported": spec.format_profile(&w.via),
        "sincere_outcome": spec.label(w.sincere_outcome).to_string(),
        "manipulated_outcome": spec.label(w.manipulated_outcome).to_string(),
    })
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Loads `--rule-file`; an explicit `--n`/`--m`/`--labels` must match it.
pub fn load_rule_file(cfg: &RunConfig) -> Result<Rule> {
    let path = cfg.rule_file()?;
    let rule = formats::load_rule(&read_file(path)?, &cfg.caps)?;
    if cfg.n.is_some() || cfg.m.is_some() || cfg.labels.is_some() {
        let spec = rule.spec();
        let wanted = cfg.spec_or(spec.n(), spec.m())?;
        if &wanted != spec {
            return Err(Error::format(
                1,
                format!(
                    "{} is over n={} m={} labels {}, but n={} m={} labels {} was requested",
                    path.display(),
                    spec.n(),
                    spec.m(),
                    spec.label_string(),
                    wanted.n(),
                    wanted.m(),
                    wanted.label_string()
                ),
            ));
        }
    }
    Ok(rule)
}

pub fn domain_stats(cfg: &RunConfig, dump: bool) -> Result<Outcome> {
    let spec = cfg.spec()?;
    let np = Domain::non_paretian(spec.clone(), &cfg.caps)?;
    let vp = if spec.n() % 2 == 1 && spec.m() >= 3 {
        Some(Domain::voting_paradox(spec.clone(), &cfg.caps)?.len())
    } else {
        None
    };
    let result = json!({
        "n": spec.n(),
        "m": spec.m(),
        "labels": spec.label_string(),
        "orderings": npsp_core::order::factorial(spec.m()),
        "total": spec.profile_space(),
        "np": np.len(),
        "vp": vp,
    });
    let mut out = Outcome::new(true, result);
    if dump {
        out.artifact = Some(formats::write_domain(&np));
    }
    Ok(out)
}

/// Strategy-proofness, range and dictatorship of a rule table.
pub fn rule_summary(rule: &Rule) -> Result<Value> {
    let spec = rule.spec();
    let witness = rule.find_manipulation();
    let ubm = if rule.domain().is_unrestricted() {
        Some(rule.is_ubm()?)
    } else {
        None
    };
    Ok(json!({
        "profiles": rule.domain().len(),
        "domain": match rule.domain().kind() {
            DomainKind::NonParetian => "np",
            DomainKind::Unrestricted => "full",
            DomainKind::VotingParadox => "vp",
            DomainKind::Custom => "custom",
        },
        "strategy_proof": witness.is_none(),
        "range": labels_of(spec, rule.range()),
        "full_range": rule.is_full_range(),
        "dictator": individual(rule.find_dictator()),
        "ubm": ubm,
        "witness": witness.as_ref().map(|w| witness_json(rule, w)),
    }))
}

pub fn check_rule(cfg: &RunConfig) -> Result<Outcome> {
    let rule = load_rule_file(cfg)?;
    let summary = rule_summary(&rule)?;
    Ok(Outcome::new(summary["strategy_proof"] == json!(true), summary))
}

pub fn find_dictator(cfg: &RunConfig) -> Result<Outcome> {
    let rule = load_rule_file(cfg)?;
    let d = rule.find_dictator();
    Ok(Outcome::new(
        d.is_some(),
        json!({
            "dictator": individual(d),
            "range": labels_of(rule.spec(), rule.range()),
        }),
    ))
}

/// Bound on BFS exploration; every fiber at desk scale is far smaller.
const MAX_VISITED: usize = 1 << 22;

pub fn spath_between(cfg: &RunConfig, from: &str, to: &str, s: &str) -> Result<Outcome> {
    let spec = cfg.spec()?;
    let u = spec.parse_profile(from)?;
    let v = spec.parse_profile(to)?;
    let s = spec.parse_set(s)?;
    let path = build_spath(&u, &v, s)?;
    let valid = path.validate(&u, &v);
    let shortest = bfs_spath_oracle(&u, &v, s, MAX_VISITED)?;
    let result = json!({
        "s": labels_of(&spec, s),
        "from": spec.format_profile(&u),
        "to": spec.format_profile(&v),
        "length": path.len(),
        "valid": valid.is_ok(),
        "violation": valid.err().map(|e| format!("{e:?}")),
        "oracle_length": shortest.as_ref().map(|p| p.len()),
        "steps": path.steps().iter().map(|p| spec.format_profile(p)).collect::<Vec<_>>(),
    });
    let passed = result["valid"] == json!(true) && shortest.is_some();
    let mut out = Outcome::new(passed, result);
    out.artifact = Some(formats::write_path(&path, &spec));
    Ok(out)
}

/// Above this many profiles the connectivity check samples pairs.
const EXHAUSTIVE_LIMIT: usize = 500;
const SAMPLES_PER_SUBSET: usize = 200;

fn fiber_key(p: &Profile, s: AltSet) -> Result<Option<Profile>> {
    Ok(if s.is_empty() { None } else { Some(p.restrict(s)?) })
}

/// Checks the constructive paths and the oracle over every subset `S`:
/// every pair of a fiber when `NP` is small, seeded samples otherwise.
pub fn spath_sweep(cfg: &RunConfig) -> Result<Outcome> {
    let spec = cfg.spec()?;
    let np = Domain::non_paretian(spec.clone(), &cfg.caps)?;
    let exhaustive = np.len() <= EXHAUSTIVE_LIMIT;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut pairs, mut build_failures, mut disagreements, mut fibers) = (0usize, 0usize, 0usize, 0usize);
    let mut first_failure: Option<Value> = None;
    for s in spec.all_alternatives().subsets() {
        let mut groups: BTreeMap<Option<Profile>, Vec<&Profile>> = BTreeMap::new();
        for p in np.profiles() {
            groups.entry(fiber_key(p, s)?).or_default().push(p);
        }
        fibers += groups.len();
        // reachability per fiber, from one BFS of its first member
        let mut components: BTreeMap<Option<Profile>, Vec<Profile>> = BTreeMap::new();
        let mut reachable = |key: &Option<Profile>, fiber: &[&Profile], v: &Profile| -> Result<bool> {
            if !components.contains_key(key) {
                components.insert(key.clone(), fiber_component(fiber[0], s, MAX_VISITED)?);
            }
            Ok(components[key].binary_search(v).is_ok())
        };
        let chosen: Vec<(Option<Profile>, Profile, Profile)> = if exhaustive {
            let mut all = Vec::new();
            for (key, fiber) in &groups {
                for u in fiber {
                    for v in fiber {
                        all.push((key.clone(), (*u).clone(), (*v).clone()));
                    }
                }
            }
            all
        } else {
            let mut sample = Vec::with_capacity(SAMPLES_PER_SUBSET);
            for _ in 0..SAMPLES_PER_SUBSET {
                let u = np.profiles().choose(&mut rng).expect("NP is nonempty");
                let key = fiber_key(u, s)?;
                let v = groups[&key].choose(&mut rng).expect("fiber holds u");
                sample.push((key, u.clone(), (*v).clone()));
            }
            sample
        };
        for (key, u, v) in chosen {
            pairs += 1;
            let built = build_spath(&u, &v, s).ok().filter(|p| p.validate(&u, &v).is_ok());
            // the component holds the fiber's first member; u and v share it
            // exactly when both are reachable from there
            let fiber = &groups[&key];
            let oracle = reachable(&key, fiber, &u)? && reachable(&key, fiber, &v)?;
            if built.is_none() {
                build_failures += 1;
            }
            if built.is_some() != oracle {
                disagreements += 1;
            }
            if (built.is_none() || !oracle) && first_failure.is_none() {
                first_failure = Some(json!({
                    "s": labels_of(&spec, s),
                    "from": spec.format_profile(&u),
                    "to": spec.format_profile(&v),
                }));
            }
        }
    }
    let passed = build_failures == 0 && disagreements == 0;
    Ok(Outcome::new(
        passed,
        json!({
            "mode": if exhaustive { "exhaustive" } else { "sampled" },
            "np": np.len(),
            "subsets": 1usize << spec.m(),
            "fibers": fibers,
            "pairs_checked": pairs,
            "build_failures": build_failures,
            "oracle_disagreements": disagreements,
            "first_failure": first_failure,
        }),
    ))
}

pub fn verify_basis_cmd(cfg: &RunConfig) -> Result<Outcome> {
    let spec = cfg.spec()?;
    cfg.require_stretch(&spec)?;
    let started = Instant::now();
    let report = verify_basis(spec, &cfg.caps, cfg.cap)?;
    let elapsed = started.elapsed();
    let mut equivalence_violations = 0;
    for g in &report.result.solutions {
        if check_equivalence(g)?.is_some() {
            equivalence_violations += 1;
        }
    }
    let matches = report.matches_dictator_tables()?;
    let passed = report.passed()? && equivalence_violations == 0;
    let result = json!({
        "status": solve_status_str(report.result.status),
        "solutions": report.solution_count(),
        "dictators": report.dictators.iter().map(|d| individual(*d)).collect::<Vec<_>>(),
        "all_dictatorial": report.all_dictatorial(),
        "matches_dictator_tables": matches,
        "vp_consistent": report.vp_consistent(),
        "equivalence_violations": equivalence_violations,
        "solver": stats_json(&report.result.stats),
    });
    Ok(Outcome::new(passed, result).note(format!("elapsed: {:.3} s", elapsed.as_secs_f64())))
}

pub fn verify_lift(cfg: &RunConfig) -> Result<Outcome> {
    let small = cfg.spec()?;
    let big = DomainSpec::with_labels(small.n() + 1, small.labels().to_vec())?;
    cfg.require_stretch(&big)?;
    let started = Instant::now();
    let np = Arc::new(Domain::non_paretian(big.clone(), &cfg.caps)?);
    let res = enumerate_solutions(&build_sp_model(np.clone(), true), cfg.cap)?;
    let n = small.n();
    let mut rows = Vec::new();
    let mut ok = res.status == SolveStatus::Sat && res.solutions.len() == big.n();
    for g in &res.solutions {
        let i = g.find_dictator();
        let last = project_clone(g, CloneSide::Last)?;
        let first = project_clone(g, CloneSide::First)?;
        let (dl, df) = (last.find_dictator(), first.find_dictator());
        let transported = match (i, dl, df) {
            (Some(i), Some(dl), Some(df)) => dl == i.min(n - 1) && df == i.saturating_sub(1),
            _ => false,
        };
        let case3 = if big.n() >= 4 {
            Some(match check_case3(g)? {
                Case3::Vacuous { .. } => "vacuous",
                Case3::Contradiction { .. } => "contradiction",
            })
        } else {
            None
        };
        let row_ok = i.is_some()
            && last.is_strategy_proof()
            && first.is_strategy_proof()
            && transported
            && case3 != Some("contradiction");
        ok &= row_ok;
        rows.push(json!({
            "dictator": individual(i),
            "last": {"strategy_proof": last.is_strategy_proof(), "dictator": individual(dl)},
            "first": {"strategy_proof": first.is_strategy_proof(), "dictator": individual(df)},
            "transported": transported,
            "case3": case3,
        }));
    }
    let case3_query = if big.n() >= 4 {
        let status = case3_solver_query(np)?;
        ok &= status == Status::Unsat;
        Some(status_str(status))
    } else {
        None
    };
    let result = json!({
        "from": {"n": small.n(), "m": small.m()},
        "to": {"n": big.n(), "m": big.m()},
        "status": solve_status_str(res.status),
        "solutions": res.solutions.len(),
        "projections": rows,
        "case3_query": case3_query,
        "solver": stats_json(&res.stats),
    });
    Ok(Outcome::new(ok, result).note(format!("elapsed: {:.3} s", started.elapsed().as_secs_f64())))
}

pub fn default_merge(spec: &DomainSpec) -> String {
    let labels = spec.labels();
    let star = ['*', '#', '+', '@']
        .into_iter()
        .find(|c| !labels.contains(c))
        .expect("labels are few");
    format!("{},{}={star}", labels[labels.len() - 2], labels[labels.len() - 1])
}

pub fn verify_merge(cfg: &RunConfig) -> Result<Outcome> {
    let rules: Vec<(String, Rule)> = match &cfg.rule_file {
        Some(path) => vec![(path.display().to_string(), load_rule_file(cfg)?)],
        None => {
            let spec = cfg.spec_or(3, 4)?;
            let np = Arc::new(Domain::non_paretian(spec.clone(), &cfg.caps)?);
            (0..spec.n())
                .map(|i| Ok((format!("dictator {}", i + 1), dictator_rule(np.clone(), i)?)))
                .collect::<Result<_>>()?
        }
    };
    let spec = rules[0].1.spec().clone();
    let text = cfg.merge.clone().unwrap_or_else(|| default_merge(&spec));
    let ms = MergeSpec::parse(spec, &text)?;
    let mut ok = true;
    let mut rows = Vec::new();
    for (name, g) in &rules {
        let r = merge_report(g, &ms)?;
        let same = r.dictator_before.is_none() || r.dictator_before == r.dictator_after;
        ok &= r.well_defined && r.sp_preserved && r.range_preserved && same;
        let big = ms.big_spec();
        rows.push(json!({
            "rule": name,
            "well_defined": r.well_defined,
            "sp_preserved": r.sp_preserved,
            "range_preserved": r.range_preserved,
            "dictator_before": individual(r.dictator_before),
            "dictator_after": individual(r.dictator_after),
            "witness": r.witness.map(|w| json!({
                "profile": ms.small_spec().format_profile(&w.profile),
                "first": big.format_profile(&w.first),
                "second": big.format_profile(&w.second),
            })),
        }));
    }
    Ok(Outcome::new(
        ok,
        json!({
            "merge": text,
            "small_labels": ms.small_spec().label_string(),
            "rules": rows,
        }),
    ))
}

pub fn decisive_sweep(cfg: &RunConfig) -> Result<Outcome> {
    let spec = cfg.spec()?;
    cfg.require_stretch(&spec)?;
    let started = Instant::now();
    let np = Arc::new(Domain::non_paretian(spec.clone(), &cfg.caps)?);
    let vp = Domain::voting_paradox(spec.clone(), &cfg.caps)?;
    let base = build_sp_model(np.clone(), true);
    let sweep = decisiveness_sweep(&base, &vp)?;
    let mut vp_range = serde_json::Map::new();
    let mut ok = sweep.unsat == sweep.queries && sweep.queries > 0;
    for a in 0..spec.m() {
        let a = Alternative(a as u8);
        let status = vp_range_check(np.clone(), &vp, a, true)?;
        ok &= status == Status::Unsat;
        vp_range.insert(spec.label(a).to_string(), json!(status_str(status)));
    }
    let first_sat = sweep.first_sat.map(|(u, j, v)| {
        json!({
            "seed": spec.format_profile(np.profile(u)),
            "individual": j + 1,
            "target": spec.format_profile(np.profile(v)),
        })
    });
    Ok(Outcome::new(
        ok,
        json!({
            "vp_profiles": vp.len(),
            "queries": sweep.queries,
            "unsat": sweep.unsat,
            "first_sat": first_sat,
            "vp_range": vp_range,
        }),
    )
    .note(format!("elapsed: {:.3} s", started.elapsed().as_secs_f64())))
}

pub fn export_cnf(cfg: &RunConfig, full_range: bool) -> Result<Outcome> {
    let path = cfg
        .cnf_out
        .as_deref()
        .ok_or_else(|| Error::Usage("export-cnf needs --cnf-out".into()))?;
    let spec = cfg.spec()?;
    let np = Arc::new(Domain::non_paretian(spec, &cfg.caps)?);
    let model = build_sp_model(np, full_range);
    let map_path = PathBuf::from(format!("{}.map", path.display()));
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    formats::write_dimacs(&model, &mut BufWriter::new(file)).map_err(|e| Error::io(path, e))?;
    let file = fs::File::create(&map_path).map_err(|e| Error::io(&map_path, e))?;
    formats::write_var_map(&model, &mut BufWriter::new(file)).map_err(|e| Error::io(&map_path, e))?;
    Ok(Outcome::new(
        true,
        json!({
            "variables": model.num_vars(),
            "clauses": model.clauses().len(),
            "sp_clauses": model.sp_clause_count(),
            "full_range": full_range,
            "cnf": path.display().to_string(),
            "map": map_path.display().to_string(),
        }),
    ))
}

fn save_rule(cfg: &RunConfig, rule: &Rule) -> Result<()> {
    if let Some(path) = &cfg.rule_file {
        write_file(path, &formats::write_rule(rule))?;
    }
    Ok(())
}

/// The example rules, named `majority-superset`, `conclusion-ubm` or
/// `dictator:<i>`. With `--rule-file` the table is also saved there.
pub fn demo(cfg: &RunConfig, name: &str) -> Result<Outcome> {
    if let Some(i) = name.strip_prefix("dictator:") {
        let spec = cfg.spec()?;
        let i: usize = i
            .parse()
            .ok()
            .filter(|&i| (1..=spec.n()).contains(&i))
            .ok_or_else(|| Error::Usage(format!("no individual {i:?}")))?;
        let g = dictator_rule(Arc::new(Domain::non_paretian(spec, &cfg.caps)?), i - 1)?;
        save_rule(cfg, &g)?;
        let summary = rule_summary(&g)?;
        return Ok(Outcome::new(summary["dictator"] == json!(i), summary));
    }
    match name {
        "majority-superset" => {
            let g = majority_superset_rule(cfg.n.unwrap_or(3), &cfg.caps)?;
            save_rule(cfg, &g)?;
            let summary = rule_summary(&g)?;
            let passed = summary["strategy_proof"] == json!(true)
                && summary["full_range"] == json!(true)
                && summary["dictator"].is_null();
            Ok(Outcome::new(passed, summary))
        }
        "conclusion-ubm" => conclusion_chain(cfg),
        other => Err(Error::Usage(format!(
            "unknown demo rule {other:?} (majority-superset, conclusion-ubm, dictator:<i>)"
        ))),
    }
}

/// The rule that follows individual 1 on a three-element `S` unless a
/// unique alternative Pareto-dominates that choice, checked on the
/// unrestricted domain, on `NP`, and through the restricted-range lift for
/// every order of `X∖S`.
pub fn conclusion_chain(cfg: &RunConfig) -> Result<Outcome> {
    let spec = cfg.spec_or(3, 4)?;
    let s: AltSet = (0..3).map(Alternative).collect();
    let full = Arc::new(Domain::unrestricted(spec.clone(), &cfg.caps)?);
    let g = conclusion_ubm_rule(full, s)?;
    save_rule(cfg, &g)?;
    let ubm = g.ubm_violation()?;
    let np = Arc::new(Domain::non_paretian(spec.clone(), &cfg.caps)?);
    let g_star = g.restrict_to(np)?;
    let np_sp = g_star.is_strategy_proof();
    let equivalence = if np_sp { check_equivalence(&g_star)?.is_none() } else { false };
    let outside: Vec<Alternative> = spec.all_alternatives().difference(s).iter().collect();
    let mut lifts: Vec<Rule> = Vec::new();
    for perm in all_orderings(outside.len()) {
        let order: Vec<Alternative> = perm.alternatives().map(|k| outside[k.index()]).collect();
        lifts.push(restricted_range_lift(&g_star, &order, &cfg.caps)?);
    }
    let lift_dictators: Vec<Option<usize>> = lifts.iter().map(Rule::find_dictator).collect();
    let invariant = lifts.windows(2).all(|w| w[0] == w[1]);
    let lift_sp = lifts.iter().all(Rule::is_strategy_proof);
    let ubm_ok = ubm.is_none();
    let passed = ubm_ok
        && g.is_full_range()
        && np_sp
        && g_star.range() == s
        && equivalence
        && lift_sp
        && lift_dictators.iter().all(Option::is_some)
        && invariant;
    let ubm_witness = ubm.map(|v| {
        let mut w = witness_json(&g, &v.manipulation);
        w["harmed"] = json!(v.harmed + 1);
        w
    });
    Ok(Outcome::new(
        passed,
        json!({
            "s": labels_of(&spec, s),
            "ubm": ubm_ok,
            "ubm_witness": ubm_witness,
            "full_range": g.is_full_range(),
            "np_strategy_proof": np_sp,
            "np_range": labels_of(&spec, g_star.range()),
            "np_equivalence": equivalence,
            "lift_orders": lifts.len(),
            "lift_strategy_proof": lift_sp,
            "lift_dictators": lift_dictators.iter().map(|d| individual(*d)).collect::<Vec<_>>(),
            "lift_invariant": invariant,
        }),
    ))
}
