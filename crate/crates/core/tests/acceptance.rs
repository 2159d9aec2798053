//! Acceptance run: one PASS/FAIL line per criterion, then a non-zero exit
//! if any criterion failed.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use subgroup_codes::caps::Caps;
use subgroup_codes::cli::suite::{fixture_suite, numtheory_check, Budget};
use subgroup_codes::group::{all_subgroups, extends_to_isomorphism, find_isomorphism, Ambient, Subgroup};
use subgroup_codes::numtheory::decompose_unit;
use subgroup_codes::perfect::{
    bad_double_coset, build_transversal, classify, coset_is_inverse_closed_without_involution, hyp_commutative,
    hyp_three_generator, hyp_two_generator, oracle_double_coset, oracle_status, quotient_cyclic_check, quotient_frames,
    random_two_subgroup, search_extension, verify_certificate, ClassifyOptions, HypothesisInstance, PerfectError,
    RuleId, Status, SweepRow,
};
use subgroup_codes::perfect::{
    conjugation_invariance, extension_stability, normalizer_reduction, sweep_cyclic, sylow_reduction,
};
use subgroup_codes::perm::Permutation;

type Outcome = Result<String, String>;
type Checker = fn(&Subgroup, &Caps) -> Option<HypothesisInstance>;

fn perm(s: &str, n: usize) -> Permutation {
    Permutation::parse(s, n).unwrap()
}

fn group(gens: &[&str], n: usize) -> Subgroup {
    let g: Vec<Permutation> = gens.iter().map(|s| perm(s, n)).collect();
    Subgroup::close(&g, n, 1 << 20).unwrap()
}

fn sym(n: usize) -> Ambient {
    Ambient::symmetric(n, &Caps::default()).unwrap()
}

fn err(e: PerfectError) -> String {
    e.to_string()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn oracle_cross_equivalence() -> Outcome {
    let caps = Caps::default();
    let mut counts = Vec::new();
    for (n, expected) in [(4usize, 30usize), (5, 156)] {
        let subs = all_subgroups(n).map_err(|e| e.to_string())?;
        ensure(subs.len() == expected, || {
            format!("S_{n} has {} subgroups, expected {expected}", subs.len())
        })?;
        let g = sym(n);
        for h in &subs {
            let bad = bad_double_coset(h, &g).map_err(err)?;
            let t = build_transversal(h, &g, caps.transversal_budget).map_err(err)?;
            ensure(bad.is_none() == t.is_some(), || format!("oracles disagree on {h:?}"))?;
            let (_, cert) = oracle_double_coset(h, &g, &caps).map_err(err)?;
            ensure(verify_certificate(h, &g, &cert), || {
                format!("certificate rejected for {h:?}")
            })?;
        }
        counts.push(format!("S_{n}: {} subgroups", subs.len()));
    }
    Ok(format!(
        "{}, oracles agree, every certificate re-verified",
        counts.join(", ")
    ))
}

fn dihedral_fixture() -> Outcome {
    let caps = Caps::default();
    let s8 = sym(8);
    let h1 = group(&["(1 4 7 6)(2 8 3 5)", "(2 5)(3 8)(4 6)"], 8);
    let h2 = group(&["(1 6)(2 4)(3 8)(5 7)", "(1 8 5 4)(2 7 3 6)"], 8);
    let (v1, _) = oracle_double_coset(&h1, &s8, &caps).map_err(err)?;
    let (v2, _) = oracle_double_coset(&h2, &s8, &caps).map_err(err)?;
    ensure(v1.status == Status::NotPerfect, || "H1 is not NotPerfect".into())?;
    ensure(v2.status == Status::Perfect, || "H2 is not Perfect".into())?;
    let y = perm("(1 2 6 5 7 3 4 8)", 8);
    ensure(coset_is_inverse_closed_without_involution(&h1, &y), || {
        "coset yH1 fails".into()
    })?;
    ensure(y.power(2) == perm("(1 4 7 6)(2 8 3 5)", 8).inverse(), || {
        "y^2 != x1^-1".into()
    })?;
    ensure(h1.order() == 8 && h1.order_profile() == h2.order_profile(), || {
        "order multisets differ".into()
    })?;
    let images = find_isomorphism(&h1, &h2).ok_or("no isomorphism found")?;
    ensure(extends_to_isomorphism(&h1, &h2, &images), || {
        "generator map does not extend".into()
    })?;
    Ok(format!(
        "H1 NotPerfect, H2 Perfect, y H1 inverse-closed without involution, H1 -> H2 via [{}]",
        images.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
    ))
}

fn squares_brute_force() -> Outcome {
    let mut checked = 0u64;
    for n in 1..=7usize {
        let mut squares = HashSet::new();
        let mut p = Permutation::identity(n);
        loop {
            squares.insert(p.compose(&p));
            if !p.next_lex() {
                break;
            }
        }
        let mut p = Permutation::identity(n);
        loop {
            checked += 1;
            ensure(p.is_square() == squares.contains(&p), || {
                format!("is_square wrong on {p}")
            })?;
            ensure(p.cycle_type().is_square_type() == p.is_square(), || {
                format!("type test wrong on {p}")
            })?;
            if !p.next_lex() {
                break;
            }
        }
    }
    Ok(format!("{checked} elements of S_1..S_7 match brute-force squaring"))
}

fn sweep_rows(ns: std::ops::RangeInclusive<usize>) -> Result<Vec<SweepRow>, String> {
    let caps = Caps::default();
    let mut rows = Vec::new();
    for n in ns {
        rows.extend(sweep_cyclic(n, &caps).map_err(err)?);
    }
    Ok(rows)
}

fn odd_two_power_types_perfect(rows: &[SweepRow]) -> Outcome {
    let odd: Vec<&SweepRow> = rows.iter().filter(|r| r.parity.is_odd()).collect();
    for r in &odd {
        ensure(r.oracle == Status::Perfect, || {
            format!("S_{} type {} is {}", r.n, r.cycle_type, r.oracle)
        })?;
    }
    Ok(format!(
        "{} odd 2-power cycle types with n <= 7, all Perfect",
        odd.len()
    ))
}

fn disjoint_transpositions() -> Outcome {
    let caps = Caps::default();
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for n in 2..=8usize {
        let g = Ambient::symmetric(n, &caps).map_err(|e| e.to_string())?;
        for j in 1..=n / 2 {
            let cycles: Vec<Vec<usize>> = (0..j).map(|i| vec![2 * i, 2 * i + 1]).collect();
            let x = Permutation::from_cycles(n, &cycles).unwrap();
            let h = Subgroup::close(&[x], n, 2).unwrap();
            let s = oracle_status(&h, &g).map_err(err)?;
            if j % 2 == 0 {
                ensure(s == Status::NotPerfect, || format!("{j} transpositions in S_{n}: {s}"))?;
                even.push(format!("{j}/S_{n}"));
            } else {
                odd.push((j, n, s));
            }
        }
    }
    let odd_perfect = odd.iter().all(|(_, _, s)| *s == Status::Perfect);
    Ok(format!(
        "even counts NotPerfect in {} cases ({}); odd counts all Perfect: {odd_perfect}",
        even.len(),
        even.join(" ")
    ))
}

fn sweep_adjudication(rows: &[SweepRow]) -> Outcome {
    for n in 4..=7 {
        ensure(rows.iter().any(|r| r.n == n), || format!("no rows for S_{n}"))?;
    }
    let mut disagreeing = Vec::new();
    for r in rows {
        ensure(r.transversal_agrees, || {
            format!("oracles disagree on {} in S_{}", r.cycle_type, r.n)
        })?;
        if r.readings_agree {
            ensure(r.same_length_odd_count == r.oracle, || {
                format!("agreeing readings wrong on {} in S_{}", r.cycle_type, r.n)
            })?;
        } else {
            ensure(r.same_length_flag || r.not_a_square_flag, || {
                format!("{} not flagged", r.cycle_type)
            })?;
            disagreeing.push(format!("{}@S_{}: oracle {}", r.cycle_type, r.n, r.oracle));
        }
    }
    ensure(disagreeing.iter().any(|d| d.starts_with("[4,2]@S_6")), || {
        "[4,2] not flagged".into()
    })?;
    let suite = fixture_suite(Budget::Quick, &Caps::default()).map_err(err)?;
    let ex = suite.fixture("ex36_h_in_s6").ok_or("suite lacks the cyclic example")?;
    let n4 = rows.iter().filter(|r| (4..=7).contains(&r.n)).count();
    Ok(format!(
        "{n4} rows for n = 4..7; readings differ on {}; cyclic example recorded ({}, agrees with claim: {})",
        disagreeing.join(", "),
        ex.observed,
        ex.agrees
    ))
}

fn invariance() -> Outcome {
    let caps = Caps::default();
    let seed = 0x5eed;
    let runs = [
        ("conjugation S_6", conjugation_invariance(6, 100, seed, &caps)),
        ("extension S_5->S_6", extension_stability(5, 50, seed + 1, &caps)),
        ("Sylow S_6", sylow_reduction(6, 50, seed + 2, &caps)),
        ("normalizer S_7", normalizer_reduction(7, 25, seed + 3, &caps)),
        ("normalizer S_8", normalizer_reduction(8, 25, seed + 4, &caps)),
    ];
    let mut parts = Vec::new();
    for (name, t) in runs {
        let t = t.map_err(err)?;
        ensure(t.passed(), || format!("{name}: {:?}", t.mismatches))?;
        parts.push(format!("{name} {}", t.checked));
    }
    Ok(parts.join(", "))
}

fn multiplier(k: usize, n: usize) -> Permutation {
    let mut im: Vec<usize> = (0..n).collect();
    for (i, slot) in im.iter_mut().enumerate().take(8) {
        *slot = (k * i) % 8;
    }
    Permutation::from_images(&im).unwrap()
}

/// `<y², m_k, m_k (9 10)>` in `S_10` with `y` the 8-cycle on 1..8 and
/// `m_k` multiplication by `k` on those points (0-based, mod 8).
fn three_generator_family(k: usize) -> Subgroup {
    let y = Permutation::from_cycles(10, &[(0..8).collect()]).unwrap();
    let x2 = multiplier(k, 10);
    let x3 = x2.compose(&perm("(9 10)", 10));
    Subgroup::close(&[y.power(2), x2, x3], 10, 1 << 20).unwrap()
}

fn checker_soundness() -> Outcome {
    let caps = Caps::default();
    let mut fixtures: Vec<(String, Subgroup)> = vec![
        ("D4 H1".into(), group(&["(1 4 7 6)(2 8 3 5)", "(2 5)(3 8)(4 6)"], 8)),
        (
            "D4 H2".into(),
            group(&["(1 6)(2 4)(3 8)(5 7)", "(1 8 5 4)(2 7 3 6)"], 8),
        ),
        (
            "S_11 H in S_8".into(),
            group(&["(4 8)(5 6)", "(3 7)(4 8)", "(1 8 2 4)(3 5 7 6)"], 8),
        ),
        ("S_11 H1 in S_8".into(), group(&["(3 7)(4 8)", "(1 8 2 4)(3 5 7 6)"], 8)),
        ("C4 x C2".into(), group(&["(1 2 3 4)", "(5 6)"], 8)),
    ];
    for k in [3, 5, 7] {
        fixtures.push((format!("three-generator k={k}"), three_generator_family(k)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let p6 = Subgroup::symmetric(6, 1 << 20).unwrap().sylow2();
    for i in 0..60 {
        fixtures.push((format!("random S_6 #{i}"), random_two_subgroup(&p6, &mut rng)));
    }

    let checkers: [(RuleId, Checker); 4] = [
        (RuleId::HypCommutative, hyp_commutative),
        (RuleId::HypTwoGenerator, hyp_two_generator),
        (RuleId::HypExtension, search_extension),
        (RuleId::HypThreeGenerator, hyp_three_generator),
    ];
    let opts = ClassifyOptions::default();
    let (mut fired, mut confirmed, mut flagged, mut frames) = (0, 0, 0, 0);
    let mut named = Vec::new();
    for (name, h) in &fixtures {
        let hits: Vec<RuleId> = checkers
            .iter()
            .filter(|(_, c)| c(h, &caps).is_some())
            .map(|(r, _)| *r)
            .collect();
        if !hits.is_empty() {
            let report = classify(h, &opts).map_err(err)?;
            for rule in &hits {
                fired += 1;
                if report.verdict == Status::NotPerfect {
                    confirmed += 1;
                } else if report.discrepancies.iter().any(|d| d.rule == *rule) {
                    flagged += 1;
                } else {
                    return Err(format!("{name}: {rule:?} fired, verdict Perfect, no discrepancy"));
                }
            }
            if !name.starts_with("random") {
                named.push(format!("{name}: {} {:?}", report.verdict, hits));
            }
        }
        for inst in quotient_frames(h, &caps, 512) {
            if inst.verify_relations() {
                frames += 1;
                let ok = quotient_cyclic_check(&inst).map_err(err)?;
                ensure(ok, || format!("{name}: quotient not cyclic"))?;
            }
        }
    }
    ensure(frames > 0, || "no quotient frames exercised".into())?;
    Ok(format!(
        "{fired} firings on {} fixtures: {confirmed} NotPerfect, {flagged} flagged as discrepancies; \
         {frames} quotient frames cyclic; [{}]",
        fixtures.len(),
        named.join("; ")
    ))
}

fn numtheory() -> Outcome {
    let s = numtheory_check(14);
    ensure(s.passed(), || {
        format!("{:?} {:?}", s.counterexamples, s.order_of_five_failures)
    })?;
    for n in 3..=16u32 {
        let mut seen = HashSet::new();
        for u in (1..1u64 << n).step_by(2) {
            let d = decompose_unit(u, n).map_err(|e| e.to_string())?;
            ensure(d.reconstruct() == u, || {
                format!("decompose({u}, {n}) does not reconstruct")
            })?;
            seen.insert((d.sign, d.power));
        }
        ensure(seen.len() as u64 == 1 << (n - 1), || {
            format!("decompose not injective for n = {n}")
        })?;
    }
    Ok(format!(
        "{} values of k for l = 2..14, no counterexample; order of 5 is 2^(n-2) for n = 3..30; \
         decompose_unit bijective for n = 3..16",
        s.k_checked
    ))
}

fn performance() -> Outcome {
    let caps = Caps::default();
    let cases = [
        (
            8usize,
            group(&["(4 8)(5 6)", "(3 7)(4 8)", "(1 8 2 4)(3 5 7 6)"], 8),
            Duration::from_secs(5),
        ),
        (8, group(&["(1 2 3 4)", "(5 6)", "(7 8)"], 8), Duration::from_secs(5)),
        (
            10,
            group(&["(1 2 3 4)", "(5 6)", "(7 8)"], 10),
            Duration::from_secs(120),
        ),
        (10, three_generator_family(3), Duration::from_secs(120)),
    ];
    let mut parts = Vec::new();
    for (n, h, limit) in cases {
        ensure(h.order() <= 16, || "fixture larger than 16".into())?;
        let t = Instant::now();
        let (v, _) = oracle_double_coset(&h, &sym(n), &caps).map_err(err)?;
        let dt = t.elapsed();
        ensure(dt < limit, || {
            format!("S_{n}, |H| = {}: {dt:?} exceeds {limit:?}", h.order())
        })?;
        parts.push(format!("S_{n} |H|={} {} in {:.2?}", h.order(), v.status, dt));
    }
    Ok(parts.join(", "))
}

fn main() {
    let started = Instant::now();
    let mut failed = 0;
    let mut report = |id: u32, name: &str, limit: Duration, f: &dyn Fn() -> Outcome| {
        let t = Instant::now();
        let result = f();
        let dt = t.elapsed();
        let (tag, detail) = match result {
            Ok(d) if dt <= limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; took {dt:.1?}, limit {limit:?}")),
            Err(e) => ("FAIL", e),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!("[{tag}] {id:>2} {name} ({dt:.2?} / {limit:?}): {detail}");
    };

    let rows = sweep_rows(2..=7);
    let rows_ref = &rows;
    let with_rows = |f: fn(&[SweepRow]) -> Outcome| move || rows_ref.as_ref().map_err(Clone::clone).and_then(|r| f(r));

    let secs = Duration::from_secs;
    report(
        1,
        "oracle cross-equivalence on S_4 and S_5",
        secs(30),
        &oracle_cross_equivalence,
    );
    report(2, "dihedral pair in S_8", secs(10), &dihedral_fixture);
    report(3, "squares by brute force, n <= 7", secs(5), &squares_brute_force);
    report(
        4,
        "odd cyclic 2-subgroups are perfect, n <= 7",
        secs(60),
        &with_rows(odd_two_power_types_perfect),
    );
    report(
        5,
        "even numbers of disjoint transpositions, n <= 8",
        secs(120),
        &disjoint_transpositions,
    );
    report(
        6,
        "cyclic sweep adjudication, n = 4..7",
        secs(300),
        &with_rows(sweep_adjudication),
    );
    report(7, "invariance suites", secs(300), &invariance);
    report(8, "non-cyclic checker soundness", secs(120), &checker_soundness);
    report(9, "unit group of Z/2^n", secs(10), &numtheory);
    report(10, "oracle performance floor", secs(120), &performance);

    println!(
        "acceptance: {} of 10 criteria passed in {:.1?}",
        10 - failed,
        started.elapsed()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
