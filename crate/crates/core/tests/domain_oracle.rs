use std::collections::{BTreeMap, BTreeSet};

use npsp_core::domain::{is_majority_cycle, majority_margin};
use npsp_core::order::{all_orderings, factorial};
use npsp_core::{Caps, Domain, DomainSpec, LinearOrder, Profile};

/// |NP(n, m)| by inclusion-exclusion over sets E of unordered pairs that are
/// unanimously oriented: for fixed E, the profiles where every individual
/// orients each pair of E the same way number
/// `Σ_σ (#orders with orientation σ on E)^n`.
fn np_count_oracle(n: u32, m: usize) -> i128 {
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
        .collect();
    let perms = all_orderings(m);
    let mut total: i128 = 0;
    for mask in 0u32..1 << pairs.len() {
        let chosen: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &pr)| pr)
            .collect();
        let mut groups: BTreeMap<Vec<bool>, i128> = BTreeMap::new();
        for o in &perms {
            let key = chosen
                .iter()
                .map(|&(a, b)| o.position(alt(a)) < o.position(alt(b)))
                .collect();
            *groups.entry(key).or_default() += 1;
        }
        let term: i128 = groups.values().map(|&g| g.pow(n)).sum();
        if chosen.len() % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn alt(a: usize) -> npsp_core::Alternative {
    npsp_core::Alternative(a as u8)
}

#[test]
fn np_counts_match_inclusion_exclusion() {
    let caps = Caps {
        max_alternatives: 6,
        max_profiles: 1_000_000,
    };
    let mut checked = 0;
    for m in 2..=6usize {
        for n in 1..=20usize {
            let space = (factorial(m) as u128).pow(n as u32);
            if space > 1_000_000 {
                break;
            }
            let d = Domain::non_paretian(DomainSpec::new(n, m).unwrap(), &caps).unwrap();
            assert_eq!(d.len() as i128, np_count_oracle(n as u32, m), "n={n} m={m}");
            checked += 1;
        }
    }
    assert!(checked >= 25);
}

#[test]
fn frozen_counts() {
    assert_eq!(np_count_oracle(3, 3), 102);
    assert_eq!(np_count_oracle(4, 3), 906);
    assert_eq!(np_count_oracle(2, 2), 2);
    assert_eq!(factorial(3), 6);
    let all = Domain::unrestricted(DomainSpec::new(3, 3).unwrap(), &Caps::default()).unwrap();
    assert_eq!(all.len(), 216);
}

#[test]
fn voting_paradox_profiles_match_the_published_list() {
    let listed = [
        "abc bca cab",
        "abc cab bca",
        "acb cba bac",
        "acb bac cba",
        "bac acb cba",
        "bac cba acb",
        "bca cab abc",
        "bca abc cab",
        "cab abc bca",
        "cab bca abc",
        "cba bac acb",
        "cba acb bac",
    ];
    let spec = DomainSpec::new(3, 3).unwrap();
    let vp = Domain::voting_paradox(spec.clone(), &Caps::default()).unwrap();
    let ours: BTreeSet<String> = vp.profiles().iter().map(|p| spec.format_profile(p)).collect();
    let theirs: BTreeSet<String> = listed.iter().map(|s| s.to_string()).collect();
    assert_eq!(ours, theirs);
}

#[test]
fn voting_paradox_is_every_alternative_beaten() {
    let spec = DomainSpec::new(3, 4).unwrap();
    let caps = Caps::default();
    let np = Domain::non_paretian(spec.clone(), &caps).unwrap();
    let vp = Domain::voting_paradox(spec, &caps).unwrap();
    for p in np.profiles() {
        let beaten = (0..4).all(|a| (0..4).any(|b| 2 * majority_margin(p, alt(b), alt(a)) > 3));
        assert_eq!(vp.contains(p), beaten);
        assert_eq!(is_majority_cycle(p), beaten);
    }
}

fn relabel(p: &Profile, sigma: &LinearOrder) -> Profile {
    let orders = p
        .orders()
        .iter()
        .map(|o| {
            let ranks: Vec<_> = o.alternatives().map(|a| sigma.at(a.index())).collect();
            LinearOrder::new(&ranks).unwrap()
        })
        .collect();
    Profile::new(orders).unwrap()
}

#[test]
fn closed_under_relabeling_and_permuting_individuals() {
    let caps = Caps::default();
    for (n, m) in [(3, 3), (3, 4), (4, 3)] {
        let d = Domain::non_paretian(DomainSpec::new(n, m).unwrap(), &caps).unwrap();
        let all = Domain::unrestricted(DomainSpec::new(n, m).unwrap(), &caps).unwrap();
        for sigma in all_orderings(m) {
            for p in d.profiles() {
                assert!(d.contains(&relabel(p, &sigma)));
            }
        }
        for p in d.profiles() {
            let mut orders = p.orders().to_vec();
            orders.rotate_left(1);
            assert!(d.contains(&Profile::new(orders.clone()).unwrap()));
            orders.swap(0, 1);
            assert!(d.contains(&Profile::new(orders).unwrap()));
        }
        let outside = all.profiles().iter().filter(|p| !d.contains(p)).count();
        assert_eq!(outside + d.len(), all.len());
    }
}

#[test]
fn membership_by_definition() {
    let spec = DomainSpec::new(3, 3).unwrap();
    let all = Domain::unrestricted(spec.clone(), &Caps::default()).unwrap();
    let np = Domain::non_paretian(spec, &Caps::default()).unwrap();
    for p in all.profiles() {
        let dominated = (0..3).any(|x| {
            (0..3).any(|y| x != y && p.orders().iter().all(|o| o.prefers(alt(x), alt(y))))
        });
        assert_eq!(np.contains(p), !dominated);
    }
}

#[test]
fn indices_are_sorted_codes() {
    let d = Domain::non_paretian(DomainSpec::new(3, 3).unwrap(), &Caps::default()).unwrap();
    let codes: Vec<u64> = d.profiles().iter().map(Profile::code).collect();
    assert!(codes.windows(2).all(|w| w[0] < w[1]));
    for (i, p) in d.profiles().iter().enumerate() {
        assert_eq!(d.index_of(p), Some(i));
        assert_eq!(Profile::from_code(3, 3, p.code()), *p);
    }
}
