//! Text formats: domain dumps, rule tables, path dumps and DIMACS.
//!
//! Rule files start with a header `n m labels [np|full|custom]` followed
//! by one line `<profile> -> <label>` per domain profile. The domain kind
//! defaults to `np`. For `np` and `full` the listed profiles must be exactly
//! the domain; a `custom` file defines its domain by the lines it lists.
//! Blank lines and lines starting with `#` are ignored everywhere.

use std::collections::BTreeMap;
use std::io::Write;
use std::sync::Arc;

use npsp_core::spath::SPath;
use npsp_core::verify::ConstraintModel;
use npsp_core::{AltSet, Caps, Domain, DomainKind, DomainSpec, Profile, Rule};

use crate::error::{Error, Result};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// One profile per line, canonical order.
pub fn write_domain(domain: &Domain) -> String {
    let spec = domain.spec();
    let mut out = String::new();
    for p in domain.profiles() {
        out.push_str(&spec.format_profile(p));
        out.push('\n');
    }
    out
}

pub fn read_domain(spec: &DomainSpec, text: &str) -> Result<Domain> {
    let mut profiles = Vec::new();
    for (line, l) in content_lines(text) {
        let p = spec
            .parse_profile(l)
            .map_err(|e| Error::format(line, e.to_string()))?;
        profiles.push(p);
    }
    Ok(Domain::from_profiles(spec.clone(), profiles)?)
}

fn kind_token(kind: DomainKind) -> &'static str {
    match kind {
        DomainKind::NonParetian => "np",
        DomainKind::Unrestricted => "full",
        _ => "custom",
    }
}

pub fn write_rule(rule: &Rule) -> String {
    let spec = rule.spec();
    let mut out = format!(
        "{} {} {} {}\n",
        spec.n(),
        spec.m(),
        spec.label_string(),
        kind_token(rule.domain().kind())
    );
    for (p, a) in rule.domain().profiles().iter().zip(rule.choices()) {
        out.push_str(&format!("{} -> {}\n", spec.format_profile(p), spec.label(*a)));
    }
    out
}

/// Header of a rule file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleHeader {
    pub spec: DomainSpec,
    pub kind: DomainKind,
}

fn parse_header(line: usize, text: &str) -> Result<RuleHeader> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if !(3..=4).contains(&fields.len()) {
        return Err(Error::format(line, "expected header \"n m labels [np|full|custom]\""));
    }
    let n: usize = fields[0]
        .parse()
        .map_err(|_| Error::format(line, format!("bad individual count {:?}", fields[0])))?;
    let m: usize = fields[1]
        .parse()
        .map_err(|_| Error::format(line, format!("bad alternative count {:?}", fields[1])))?;
    let labels: Vec<char> = fields[2].chars().collect();
    if labels.len() != m {
        return Err(Error::format(line, format!("{} labels for m = {m}", labels.len())));
    }
    let spec = DomainSpec::with_labels(n, labels).map_err(|e| Error::format(line, e.to_string()))?;
    let kind = match fields.get(3).copied().unwrap_or("np") {
        "np" => DomainKind::NonParetian,
        "full" => DomainKind::Unrestricted,
        "custom" => DomainKind::Custom,
        other => return Err(Error::format(line, format!("unknown domain kind {other:?}"))),
    };
    Ok(RuleHeader { spec, kind })
}

type Entries = Vec<(usize, Profile, npsp_core::Alternative)>;

fn parse_entries(text: &str) -> Result<(RuleHeader, Entries)> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| Error::format(1, "missing header"))?;
    let header = parse_header(hl, header)?;
    let spec = &header.spec;
    let mut entries = Vec::new();
    for (line, l) in lines {
        let (profile, label) = l
            .split_once("->")
            .ok_or_else(|| Error::format(line, "expected \"<profile> -> <label>\""))?;
        let p = spec
            .parse_profile(profile.trim())
            .map_err(|e| Error::format(line, e.to_string()))?;
        let label = label.trim();
        let mut chars = label.chars();
        let a = match (chars.next(), chars.next()) {
            (Some(c), None) => spec
                .alternative(c)
                .ok_or_else(|| Error::format(line, format!("unknown label {c:?}")))?,
            _ => return Err(Error::format(line, format!("bad outcome {label:?}"))),
        };
        entries.push((line, p, a));
    }
    Ok((header, entries))
}

/// Reads a rule over `domain`; every domain profile must appear exactly once.
pub fn read_rule(text: &str, domain: Arc<Domain>) -> Result<Rule> {
    let (header, entries) = parse_entries(text)?;
    if &header.spec != domain.spec() {
        return Err(Error::format(
            1,
            format!(
                "file is over n={} m={} labels {}, expected n={} m={} labels {}",
                header.spec.n(),
                header.spec.m(),
                header.spec.label_string(),
                domain.n(),
                domain.m(),
                domain.spec().label_string()
            ),
        ));
    }
    table(entries, domain)
}

fn table(entries: Entries, domain: Arc<Domain>) -> Result<Rule> {
    let spec = domain.spec().clone();
    let mut choice: Vec<Option<(usize, npsp_core::Alternative)>> = vec![None; domain.len()];
    for (line, p, a) in entries {
        let i = domain.index_of(&p).ok_or_else(|| {
            Error::format(line, format!("profile {} is not in the domain", spec.format_profile(&p)))
        })?;
        if let Some((first, _)) = choice[i] {
            return Err(Error::format(
                line,
                format!("duplicate entry for {} (first on line {first})", spec.format_profile(&p)),
            ));
        }
        choice[i] = Some((line, a));
    }
    let mut out = Vec::with_capacity(choice.len());
    for (i, c) in choice.into_iter().enumerate() {
        match c {
            Some((_, a)) => out.push(a),
            None => {
                return Err(Error::Incomplete(format!(
                    "missing entry for profile {}",
                    spec.format_profile(domain.profile(i))
                )))
            }
        }
    }
    Ok(Rule::new(domain, out)?)
}

/// Reads a rule file, building the domain its header names.
pub fn load_rule(text: &str, caps: &Caps) -> Result<Rule> {
    let (header, entries) = parse_entries(text)?;
    let domain = match header.kind {
        DomainKind::NonParetian => Domain::non_paretian(header.spec, caps)?,
        DomainKind::Unrestricted => Domain::unrestricted(header.spec, caps)?,
        _ => {
            let mut seen = BTreeMap::new();
            for (line, p, _) in &entries {
                if let Some(first) = seen.insert(p.clone(), *line) {
                    return Err(Error::format(
                        *line,
                        format!(
                            "duplicate entry for {} (first on line {first})",
                            header.spec.format_profile(p)
                        ),
                    ));
                }
            }
            Domain::from_profiles(header.spec, seen.into_keys().collect())?
        }
    };
    table(entries, Arc::new(domain))
}

pub fn write_path(path: &SPath, spec: &DomainSpec) -> String {
    let mut out = format!("S={}\n", spec.format_set(path.s()));
    for p in path.steps() {
        out.push_str(&spec.format_profile(p));
        out.push('\n');
    }
    out
}

pub fn read_path(text: &str, spec: &DomainSpec) -> Result<SPath> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| Error::format(1, "missing header"))?;
    let set = header
        .strip_prefix("S=")
        .ok_or_else(|| Error::format(hl, "expected header \"S=<labels>\""))?;
    let s: AltSet = spec
        .parse_set(set.trim())
        .map_err(|e| Error::format(hl, e.to_string()))?;
    let mut steps = Vec::new();
    for (line, l) in lines {
        steps.push(
            spec.parse_profile(l)
                .map_err(|e| Error::format(line, e.to_string()))?,
        );
    }
    Ok(SPath::new(s, steps))
}

/// DIMACS CNF; variable `k` of the model is written as `k + 1`.
pub fn write_dimacs(model: &ConstraintModel, out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "p cnf {} {}", model.num_vars(), model.clauses().len())?;
    for clause in model.clauses() {
        for lit in clause {
            write!(out, "{} ", lit.to_dimacs())?;
        }
        writeln!(out, "0")?;
    }
    Ok(())
}

/// Sidecar lines `<profile> <label> <variable number>`.
pub fn write_var_map(model: &ConstraintModel, out: &mut impl Write) -> std::io::Result<()> {
    let domain = model.domain();
    let spec = domain.spec();
    for (p, profile) in domain.profiles().iter().enumerate() {
        let text = spec.format_profile(profile);
        for a in 0..spec.m() {
            let a = npsp_core::Alternative(a as u8);
            writeln!(out, "{} {} {}", text, spec.label(a), model.var(p, a).0 + 1)?;
        }
    }
    Ok(())
}

/// Reads a DIMACS model line set (`v ...` lines or a bare list of signed
/// integers) into an assignment over `num_vars` variables.
pub fn read_assignment(text: &str, num_vars: usize) -> Result<Vec<bool>> {
    let mut model = vec![false; num_vars];
    for (line, l) in content_lines(text) {
        let l = l.strip_prefix('v').unwrap_or(l);
        if l.starts_with('s') || l.starts_with('c') {
            continue;
        }
        for tok in l.split_whitespace() {
            let v: i64 = tok
                .parse()
                .map_err(|_| Error::format(line, format!("bad literal {tok:?}")))?;
            let k = v.unsigned_abs() as usize;
            if k == 0 {
                continue;
            }
            if k > num_vars {
                return Err(Error::format(line, format!("variable {k} out of range")));
            }
            model[k - 1] = v > 0;
        }
    }
    Ok(model)
}
