//! Domain specs and enumerated, canonically indexed profile sets.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::order::{factorial, AltSet, Alternative, MAX_ALTERNATIVES};
use crate::profile::Profile;
use crate::{Error, Result};

/// Number of individuals, number of alternatives and their display labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DomainSpec {
    n: usize,
    labels: Vec<char>,
}

impl DomainSpec {
    /// `n` individuals and alternatives labelled `a`, `b`, ...
    pub fn new(n: usize, m: usize) -> Result<DomainSpec> {
        if m > MAX_ALTERNATIVES {
            return Err(Error::InvalidSpec(format!(
                "m = {m} exceeds the supported maximum {MAX_ALTERNATIVES}"
            )));
        }
        DomainSpec::with_labels(n, ('a'..='z').take(m).collect())
    }

    pub fn with_labels(n: usize, labels: Vec<char>) -> Result<DomainSpec> {
        let m = labels.len();
        if n < 1 {
            return Err(Error::InvalidSpec("need at least one individual".into()));
        }
        if m < 2 {
            return Err(Error::InvalidSpec("need at least two alternatives".into()));
        }
        if m > MAX_ALTERNATIVES {
            return Err(Error::InvalidSpec(format!(
                "m = {m} exceeds the supported maximum {MAX_ALTERNATIVES}"
            )));
        }
        for (k, c) in labels.iter().enumerate() {
            if c.is_whitespace() || labels[..k].contains(c) {
                return Err(Error::InvalidSpec(format!("label '{c}' is blank or repeated")));
            }
        }
        Ok(DomainSpec { n, labels })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[char] {
        &self.labels
    }

    pub fn label(&self, a: Alternative) -> char {
        self.labels[a.index()]
    }

    pub fn label_string(&self) -> String {
        self.labels.iter().collect()
    }

    pub fn alternative(&self, label: char) -> Option<Alternative> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .map(|i| Alternative(i as u8))
    }

    pub fn all_alternatives(&self) -> AltSet {
        AltSet::full(self.m())
    }

    /// Labels of the members of `set`, in index order.
    pub fn format_set(&self, set: AltSet) -> String {
        set.iter().map(|a| self.label(a)).collect()
    }

    /// Reads a set written as a string of labels.
    pub fn parse_set(&self, text: &str) -> Result<AltSet> {
        text.chars()
            .enumerate()
            .map(|(t, c)| {
                self.alternative(c).ok_or_else(|| Error::Parse {
                    token: t,
                    message: format!("unknown label '{c}'"),
                })
            })
            .collect()
    }

    pub fn parse_profile(&self, text: &str) -> Result<Profile> {
        Profile::parse(text, &self.labels, self.n)
    }

    pub fn format_profile(&self, p: &Profile) -> String {
        p.format(&self.labels)
    }

    /// `(m!)^n`, saturating.
    pub fn profile_space(&self) -> u64 {
        let base = factorial(self.m());
        (0..self.n).fold(1u64, |acc, _| acc.saturating_mul(base))
    }

    /// Whether `p` is a profile of this spec's shape.
    pub fn fits(&self, p: &Profile) -> bool {
        p.n() == self.n && p.support() == self.all_alternatives()
    }
}

/// Guards against accidental combinatorial explosion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub max_alternatives: usize,
    /// Upper bound on `(m!)^n`, the size of the unrestricted domain.
    pub max_profiles: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_alternatives: 6,
            max_profiles: 10_000_000,
        }
    }
}

impl Caps {
    pub fn check(&self, spec: &DomainSpec) -> Result<()> {
        if spec.m() > self.max_alternatives {
            return Err(Error::CapExceeded {
                cap: "max_alternatives",
                limit: self.max_alternatives as u64,
                requested: spec.m() as u64,
            });
        }
        let space = spec.profile_space();
        if space > self.max_profiles {
            return Err(Error::CapExceeded {
                cap: "max_profiles",
                limit: self.max_profiles,
                requested: space,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainKind {
    /// Every profile, `L(X)^N`.
    Unrestricted,
    /// `NP(n, m)`.
    NonParetian,
    /// Non-Paretian profiles where every alternative loses a majority contest.
    VotingParadox,
    Custom,
}

/// A set of profiles in canonical (lexicographic) order with exact lookup.
#[derive(Debug, Clone)]
pub struct Domain {
    spec: DomainSpec,
    kind: DomainKind,
    profiles: Vec<Profile>,
    codes: Vec<u64>,
}

impl PartialEq for Domain {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec && self.codes == other.codes
    }
}

impl Eq for Domain {}

impl Domain {
    fn filtered(
        spec: DomainSpec,
        kind: DomainKind,
        caps: &Caps,
        keep: impl Fn(&Profile) -> bool,
    ) -> Result<Domain> {
        caps.check(&spec)?;
        let (n, m) = (spec.n(), spec.m());
        let mut profiles = Vec::new();
        let mut codes = Vec::new();
        for code in 0..spec.profile_space() {
            let p = Profile::from_code(n, m, code);
            if keep(&p) {
                profiles.push(p);
                codes.push(code);
            }
        }
        Ok(Domain {
            spec,
            kind,
            profiles,
            codes,
        })
    }

    /// All of `L(X)^N`.
    pub fn unrestricted(spec: DomainSpec, caps: &Caps) -> Result<Domain> {
        Domain::filtered(spec, DomainKind::Unrestricted, caps, |_| true)
    }

    /// `NP(n, m)` in canonical order.
    pub fn non_paretian(spec: DomainSpec, caps: &Caps) -> Result<Domain> {
        Domain::filtered(spec, DomainKind::NonParetian, caps, Profile::is_non_paretian)
    }

    /// The voting-paradox profiles: members of `NP(n, m)` at which every
    /// alternative loses at least one pairwise majority comparison.
    pub fn voting_paradox(spec: DomainSpec, caps: &Caps) -> Result<Domain> {
        if spec.n().is_multiple_of(2) {
            return Err(Error::EvenIndividuals(spec.n()));
        }
        if spec.m() < 3 {
            return Err(Error::InvalidSpec(
                "voting paradox profiles need at least three alternatives".into(),
            ));
        }
        Domain::filtered(spec, DomainKind::VotingParadox, caps, |p| {
            p.is_non_paretian() && is_majority_cycle(p)
        })
    }

    /// A custom domain. Profiles are sorted into canonical order.
    pub fn from_profiles(spec: DomainSpec, profiles: Vec<Profile>) -> Result<Domain> {
        let mut keyed: Vec<(u64, Profile)> = Vec::with_capacity(profiles.len());
        for p in profiles {
            if !spec.fits(&p) {
                return Err(Error::SpecMismatch);
            }
            keyed.push((p.code(), p));
        }
        keyed.sort_by_key(|(c, _)| *c);
        if keyed.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Precondition("duplicate profile in domain".into()));
        }
        let (codes, profiles) = keyed.into_iter().unzip();
        Ok(Domain {
            spec,
            kind: DomainKind::Custom,
            profiles,
            codes,
        })
    }

    pub fn spec(&self) -> &DomainSpec {
        &self.spec
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.spec.n()
    }

    pub fn m(&self) -> usize {
        self.spec.m()
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    pub fn profiles(&self) -> &[Profile] {
        &self.profiles
    }

    pub fn profile(&self, i: usize) -> &Profile {
        &self.profiles[i]
    }

    /// Whether this is the whole of `L(X)^N`.
    pub fn is_unrestricted(&self) -> bool {
        self.len() as u64 == self.spec.profile_space()
    }

    pub fn index_of(&self, p: &Profile) -> Option<usize> {
        if !self.spec.fits(p) {
            return None;
        }
        self.index_of_code(p.code())
    }

    pub fn index_of_code(&self, code: u64) -> Option<usize> {
        self.codes.binary_search(&code).ok()
    }

    pub fn contains(&self, p: &Profile) -> bool {
        self.index_of(p).is_some()
    }

    /// `(h, j)` for every profile `j` of the domain that differs from
    /// profile `i` in individual `h`'s order only; ascending in `h`, then `j`.
    pub fn variants(&self, i: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n();
        let base = factorial(self.m());
        let code = self.codes[i];
        (0..n).flat_map(move |h| {
            let weight = base.pow((n - 1 - h) as u32);
            let own = (code / weight) % base;
            let stem = code - own * weight;
            (0..base)
                .filter(move |&o| o != own)
                .filter_map(move |o| self.index_of_code(stem + o * weight).map(|j| (h, j)))
        })
    }

    /// Indices of the profiles where `voter` ranks `a` first.
    pub fn where_top(&self, voter: usize, a: Alternative) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&i| self.profiles[i].order(voter).top() == a)
    }
}

/// Whether every alternative loses some strict pairwise majority contest.
pub fn is_majority_cycle(p: &Profile) -> bool {
    let n = p.n();
    let alts: Vec<Alternative> = p.order(0).alternatives().collect();
    alts.iter().all(|&x| {
        alts.iter()
            .any(|&y| y != x && 2 * majority_margin(p, y, x) > n)
    })
}

/// Number of individuals ranking `x` above `y`.
pub fn majority_margin(p: &Profile, x: Alternative, y: Alternative) -> usize {
    p.orders().iter().filter(|o| o.prefers(x, y)).count()
}
