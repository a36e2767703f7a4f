//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use itertools::Itertools;
use matroid_xf_core::exchange::all_exchange_bijections;
use matroid_xf_core::factorization::{
    build_extended_formulation, factorize_from_transcripts, factorize_one_bit, random_objectives,
    verify_optimization_equivalence, verify_vertex_lifting,
};
use matroid_xf_core::hitting::{
    direct_sum_family, is_hitting_family, minimum_hitting_family, star_hitting_family,
};
use matroid_xf_core::protocol::{expected_value, star_protocol_bits};
use matroid_xf_core::{
    exchange_bijection, slack_by_ordering, BasePolytope, Basis, Caps, ElementSet, Graph, Matroid,
    RankOracle, Rational,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fano() -> Matroid {
    Matroid::binary(&[
        vec![1, 0, 0, 1, 1, 0, 1],
        vec![0, 1, 0, 1, 0, 1, 1],
        vec![0, 0, 1, 0, 1, 1, 1],
    ])
    .unwrap()
}

fn complete(n: usize) -> Matroid {
    Matroid::graphic(Graph::complete(n)).unwrap()
}

fn uniform(r: usize, n: usize) -> Matroid {
    Matroid::uniform(r, n).unwrap()
}

fn suite() -> Vec<(&'static str, Matroid)> {
    vec![
        ("U(1,3)", uniform(1, 3)),
        ("U(2,3)", uniform(2, 3)),
        ("U(2,4)", uniform(2, 4)),
        ("U(3,5)", uniform(3, 5)),
        ("M(K4)", complete(4)),
        ("M(K5)", complete(5)),
        ("Fano", fano()),
        ("dual Fano", fano().dual().unwrap()),
        ("M(K3)+U(2,3)", complete(3).direct_sum(&uniform(2, 3)).unwrap()),
    ]
}

fn polytope(m: Matroid) -> Result<BasePolytope, String> {
    BasePolytope::new(m, &Caps::default()).map_err(|e| e.to_string())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Smallest number of bases covering every flacet, by trying all subsets in
/// order of size.
fn brute_force_hitting_number(p: &BasePolytope) -> usize {
    let tight: Vec<Vec<bool>> =
        p.bases().iter().map(|&b| p.flacets().iter().map(|f| f.is_tight(b)).collect()).collect();
    (0..=p.bases().len())
        .find(|&k| {
            (0..p.bases().len()).combinations(k).any(|choice| {
                (0..p.flacets().len()).all(|f| choice.iter().any(|&b| tight[b][f]))
            })
        })
        .unwrap()
}

fn log2_ceil(x: usize) -> u32 {
    let mut bits = 0;
    while (1usize << bits) < x {
        bits += 1;
    }
    bits
}

fn slack_by_ordering_count() -> Outcome {
    let mut checked = 0usize;
    for (name, m) in suite() {
        let p = polytope(m)?;
        for f in p.flacets() {
            for &b in p.bases().iter().filter(|&&b| f.is_tight(b)) {
                for &b2 in p.bases() {
                    let bij = exchange_bijection(p.matroid(), b, b2).map_err(|e| e.to_string())?;
                    let count = slack_by_ordering(f, &bij).map_err(|e| e.to_string())?;
                    let slack = f.rhs - b2.set().intersection(f.flat).len();
                    ensure(count == slack, || {
                        format!("{name}: F={} B={b} B'={b2}: count {count}, slack {slack}", f.flat)
                    })?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} (flacet, full-intersection basis, basis) triples"))
}

fn protocol_correctness() -> Outcome {
    let mut checked = 0usize;
    for (name, m) in suite() {
        let p = polytope(m)?;
        let fam = minimum_hitting_family(&p).map_err(|e| e.to_string())?;
        for f in p.flacets() {
            for &b in p.bases() {
                let ev = expected_value(&p, &fam, f, b).map_err(|e| e.to_string())?;
                let slack = f.slack(b);
                ensure(ev == Rational::from_integer(slack.into()), || {
                    format!("{name}: F={} B'={b}: expectation {ev}, slack {slack}", f.flat)
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (flacet, basis) pairs"))
}

fn factorization_identity() -> Outcome {
    let mut worst = String::new();
    for (name, m) in suite() {
        let p = polytope(m)?;
        let fam = minimum_hitting_family(&p).map_err(|e| e.to_string())?;
        let fac = factorize_from_transcripts(&p, &fam).map_err(|e| e.to_string())?;
        ensure(fac.is_nonnegative(), || format!("{name}: negative factor entry"))?;
        if let Some((i, j)) = fac.first_mismatch(&p) {
            return Err(format!("{name}: T·U differs from S at ({i}, {j})"));
        }
        let bound = fam.len() * p.n() * p.rank();
        let num_y = fac.inner_dimension();
        ensure(num_y <= bound, || format!("{name}: num_y {num_y} > h·n·r = {bound}"))?;
        if name == "M(K5)" {
            worst = format!("M(K5) num_y {num_y} <= {bound}");
        }
    }
    Ok(worst)
}

fn formulation_exactness() -> Outcome {
    let mut objectives_checked = 0usize;
    for (name, m) in suite() {
        let p = polytope(m)?;
        let fam = minimum_hitting_family(&p).map_err(|e| e.to_string())?;
        let fac = factorize_from_transcripts(&p, &fam).map_err(|e| e.to_string())?;
        let ef = build_extended_formulation(&p, &fac);
        let lifting = verify_vertex_lifting(&p, &ef, &fac);
        ensure(lifting.passed(), || format!("{name}: {lifting:?}"))?;
        let objectives = random_objectives(p.n(), 50, 1);
        let opt = verify_optimization_equivalence(&p, &ef, &objectives).map_err(|e| e.to_string())?;
        ensure(opt.passed(), || format!("{name}: {opt:?}"))?;
        objectives_checked += objectives.len();
    }
    Ok(format!("{objectives_checked} objectives, all vertices lifted"))
}

fn star_size_bound() -> Outcome {
    let mut parts = Vec::new();
    for n in 3..=6 {
        let p = polytope(complete(n))?;
        let (_, fac) = factorize_one_bit(&p).map_err(|e| e.to_string())?;
        let edges = n * (n - 1) / 2;
        let bound = 2 * (n - 1) * edges;
        let num_y = fac.inner_dimension();
        ensure(num_y <= bound, || format!("K{n}: num_y {num_y} > {bound}"))?;
        let bits = star_protocol_bits(n);
        let expected = log2_ceil(edges) + log2_ceil(n) + 1;
        ensure(bits == expected, || format!("K{n}: bits {bits}, expected {expected}"))?;
        parts.push(format!("K{n} num_y={num_y}/{bound} bits={bits}"));
    }
    Ok(parts.join(", "))
}

fn star_families() -> Outcome {
    for n in 3..=6 {
        let p = polytope(complete(n))?;
        let fam = star_hitting_family(&p).map_err(|e| e.to_string())?;
        ensure(fam.len() == n - 1, || format!("K{n}: {} stars", fam.len()))?;
        let check = is_hitting_family(&p, fam.bases()).map_err(|e| e.to_string())?;
        ensure(check.is_hitting(), || format!("K{n}: {check:?}"))?;
    }
    let p = polytope(complete(4))?;
    let h = minimum_hitting_family(&p).map_err(|e| e.to_string())?.len();
    let oracle = brute_force_hitting_number(&p);
    ensure(oracle == 2, || format!("brute-force h(K4) = {oracle}"))?;
    ensure(h == 2, || format!("minimum_hitting_family(K4) has size {h}"))?;
    Ok("stars hit K3..K6, h(K4) = 2".into())
}

fn duality() -> Outcome {
    let mut parts = Vec::new();
    for (name, m) in [("U(2,4)", uniform(2, 4)), ("M(K4)", complete(4)), ("Fano", fano())] {
        let dual = m.dual().map_err(|e| e.to_string())?;
        let p = polytope(m)?;
        let pd = polytope(dual)?;
        let h = minimum_hitting_family(&p).map_err(|e| e.to_string())?.len();
        let hd = minimum_hitting_family(&pd).map_err(|e| e.to_string())?.len();
        ensure(h == hd, || format!("{name}: h = {h}, h* = {hd}"))?;
        let (oracle, oracle_dual) = (brute_force_hitting_number(&p), brute_force_hitting_number(&pd));
        ensure(oracle == h && oracle_dual == hd, || {
            format!("{name}: brute force gives {oracle}/{oracle_dual}, solver {h}/{hd}")
        })?;
        parts.push(format!("{name} h={h}"));
    }
    Ok(parts.join(", "))
}

fn direct_sums() -> Outcome {
    let mut parts = Vec::new();
    for (name, m1, m2) in [
        ("M(K3)+U(2,3)", complete(3), uniform(2, 3)),
        ("U(2,4)+M(K4)", uniform(2, 4), complete(4)),
    ] {
        let sum = polytope(m1.direct_sum(&m2).map_err(|e| e.to_string())?)?;
        let p1 = polytope(m1.clone())?;
        let p2 = polytope(m2.clone())?;
        let f1 = minimum_hitting_family(&p1).map_err(|e| e.to_string())?;
        let f2 = minimum_hitting_family(&p2).map_err(|e| e.to_string())?;
        let fam = direct_sum_family(&sum, &m1, &f1, &m2, &f2).map_err(|e| e.to_string())?;
        let check = is_hitting_family(&sum, fam.bases()).map_err(|e| e.to_string())?;
        ensure(check.is_hitting(), || format!("{name}: combined family {check:?}"))?;
        let h = minimum_hitting_family(&sum).map_err(|e| e.to_string())?.len();
        ensure(h <= f1.len() + f2.len(), || {
            format!("{name}: h = {h} > {} + {}", f1.len(), f2.len())
        })?;
        parts.push(format!("{name} h={h}<={}+{}", f1.len(), f2.len()));
    }
    Ok(parts.join(", "))
}

fn exchange_existence() -> Outcome {
    let (mut pairs, mut compared) = (0usize, 0usize);
    for (name, m) in suite() {
        let p = polytope(m)?;
        for &b in p.bases() {
            for &b2 in p.bases() {
                let bij = exchange_bijection(p.matroid(), b, b2)
                    .map_err(|e| format!("{name}: {b} -> {b2}: {e}"))?;
                ensure(bij.is_valid(p.matroid()), || format!("{name}: invalid bijection {b} -> {b2}"))?;
                pairs += 1;
                if b.set().difference(b2.set()).len() > 5 {
                    continue;
                }
                let all = all_exchange_bijections(p.matroid(), b, b2).map_err(|e| e.to_string())?;
                for f in p.flacets().iter().filter(|f| f.is_tight(b)) {
                    let counts: Vec<usize> = all
                        .iter()
                        .map(|bij| slack_by_ordering(f, bij))
                        .collect::<Result<_, _>>()
                        .map_err(|e| e.to_string())?;
                    ensure(counts.iter().all_equal(), || {
                        format!("{name}: F={} B={b} B'={b2}: counts {counts:?}", f.flat)
                    })?;
                    compared += counts.len();
                }
            }
        }
    }
    Ok(format!("{pairs} basis pairs, {compared} bijection counts compared"))
}

fn flacet_agreement() -> Outcome {
    let mut instances: Vec<(String, Matroid)> = Vec::new();
    for n in 1..=6 {
        for r in 1..=n {
            instances.push((format!("U({r},{n})"), uniform(r, n)));
        }
    }
    let named = [
        ("M(K4)", complete(4)),
        ("M(K5)", complete(5)),
        ("Fano", fano()),
        ("dual Fano", fano().dual().unwrap()),
    ];
    for (a, m1) in &named {
        instances.push((a.to_string(), m1.clone()));
    }
    for ((a, m1), (b, m2)) in named.iter().tuple_combinations() {
        if m1.n() + m2.n() <= 14 {
            instances.push((format!("{a}+{b}"), m1.direct_sum(m2).unwrap()));
        }
    }
    instances.push(("M(K3)+U(2,3)".into(), complete(3).direct_sum(&uniform(2, 3)).unwrap()));
    instances.push(("U(2,4)+U(1,3)".into(), uniform(2, 4).direct_sum(&uniform(1, 3)).unwrap()));
    let count = instances.len();
    for (name, m) in instances {
        let p = polytope(m)?;
        let d = &p.flacet_report().disagreements;
        ensure(d.is_empty(), || format!("{name}: fast path disagrees on {d:?}"))?;
    }
    let p = polytope(uniform(1, 3))?;
    ensure(p.flacets().is_empty(), || format!("U(1,3) has {} flacets", p.flacets().len()))?;
    let fam = minimum_hitting_family(&p).map_err(|e| e.to_string())?;
    let fac = factorize_from_transcripts(&p, &fam).map_err(|e| e.to_string())?;
    let size = build_extended_formulation(&p, &fac).size();
    ensure(size == 6, || format!("U(1,3) formulation has {size} inequalities"))?;
    Ok(format!("{count} instances agree; U(1,3): 0 flacets, 6 inequalities"))
}

fn axioms() -> Outcome {
    let mut checked = Vec::new();
    for (name, m) in suite().into_iter().filter(|(_, m)| m.n() <= 8) {
        let sets: Vec<ElementSet> = m.ground().subsets().collect();
        for e in 0..m.n() {
            ensure(m.rank_of(ElementSet::singleton(e)) == 1, || format!("{name}: {e} is a loop"))?;
        }
        for &a in &sets {
            for &b in &sets {
                let (ra, rb) = (m.rank_of(a), m.rank_of(b));
                if a.is_subset(b) {
                    ensure(ra <= rb, || format!("{name}: monotonicity fails on {a} ⊆ {b}"))?;
                }
                ensure(m.rank_of(a.union(b)) + m.rank_of(a.intersection(b)) <= ra + rb, || {
                    format!("{name}: submodularity fails on {a}, {b}")
                })?;
            }
        }
        let bases: Vec<Basis> = m.bases(&Caps::default()).map_err(|e| e.to_string())?;
        ensure(bases.iter().all(|b| b.len() == m.rank()), || format!("{name}: basis size"))?;
        checked.push(name);
    }
    Ok(checked.join(", "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("slack-by-ordering equals slack", slack_by_ordering_count),
        ("protocol correctness", protocol_correctness),
        ("factorization identity", factorization_identity),
        ("formulation exactness", formulation_exactness),
        ("one-bit size bound on K3..K6", star_size_bound),
        ("star hitting families", star_families),
        ("duality of hitting number", duality),
        ("direct sums", direct_sums),
        ("exchange existence", exchange_existence),
        ("flacet oracle agreement", flacet_agreement),
        ("rank axioms", axioms),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({detail}) [{secs:.2}s]", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} FAIL {name}: {why} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
