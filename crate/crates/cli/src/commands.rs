use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use matroid_xf_core::factorization::{
    build_extended_formulation, factorize_from_transcripts, factorize_one_bit, random_objectives,
    verify_optimization_equivalence, verify_vertex_lifting, LiftingCheck, OptimizationCheck,
};
use matroid_xf_core::hitting::{greedy_hitting_family, minimum_hitting_family, star_hitting_family};
use matroid_xf_core::protocol::{check_protocol, protocol_stats, star_protocol_bits, CanonicalOrdering};
use matroid_xf_core::{
    BasePolytope, Caps, Error as CoreError, ExtendedFormulation, Graph, HittingFamily, Matroid,
    NonnegFactorization,
};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FamilyMode {
    Exact,
    Greedy,
    Stars,
}

impl FamilyMode {
    fn name(self) -> &'static str {
        match self {
            FamilyMode::Exact => "exact",
            FamilyMode::Greedy => "greedy",
            FamilyMode::Stars => "stars",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum BenchFamily {
    /// Graphic matroids of K_n, n = number of vertices.
    CompleteGraphs,
    /// Uniform matroids U(2,n).
    UniformRankTwo,
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io { path: p.to_owned(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Picks the hitting family and returns it with the line echoing the choice.
fn select_family(p: &BasePolytope, mode: Option<FamilyMode>) -> Result<(FamilyMode, HittingFamily, String), CliError> {
    let (mode, fam, note) = match mode {
        Some(FamilyMode::Exact) => (FamilyMode::Exact, minimum_hitting_family(p)?, ""),
        Some(FamilyMode::Greedy) => (FamilyMode::Greedy, greedy_hitting_family(p), ""),
        Some(FamilyMode::Stars) => (FamilyMode::Stars, star_hitting_family(p)?, ""),
        None => match minimum_hitting_family(p) {
            Ok(f) => (FamilyMode::Exact, f, " (default)"),
            Err(CoreError::ResourceLimit { .. }) => {
                (FamilyMode::Greedy, greedy_hitting_family(p), " (default; exact search over cap)")
            }
            Err(e) => return Err(e.into()),
        },
    };
    let line = format!("family-mode: {}{note}, size {}", mode.name(), fam.len());
    Ok((mode, fam, line))
}

struct Built {
    echo: String,
    fac: NonnegFactorization,
    ef: ExtendedFormulation,
    bits: u32,
}

/// The formulation from the chosen family. Star families use the one-bit
/// spanning-tree protocol, all others the generic one.
fn build(p: &BasePolytope, mode: Option<FamilyMode>) -> Result<Built, CliError> {
    let (mode, fam, echo) = select_family(p, mode)?;
    let (fac, bits) = if mode == FamilyMode::Stars {
        let (_, fac) = factorize_one_bit(p)?;
        (fac, star_protocol_bits(p.matroid().graph().map_or(0, Graph::vertex_count)))
    } else {
        (factorize_from_transcripts(p, &fam)?, protocol_stats(p, &fam)?.bits)
    };
    let ef = build_extended_formulation(p, &fac);
    Ok(Built { echo, fac, ef, bits })
}

pub fn info(m: Matroid, caps: &Caps) -> Result<(), CliError> {
    let p = BasePolytope::new(m, caps)?;
    let m = p.matroid();
    let mut out = String::new();
    writeln!(out, "type: {}", m.kind_name()).unwrap();
    writeln!(out, "n: {}", m.n()).unwrap();
    writeln!(out, "r: {}", m.rank()).unwrap();
    writeln!(out, "bases: {}", p.bases().len()).unwrap();
    writeln!(out, "connected: {}", if p.components().len() == 1 { "yes" } else { "no" }).unwrap();
    writeln!(out, "components: {}", p.components().len()).unwrap();
    writeln!(out, "flats: {}", p.flats().len()).unwrap();
    writeln!(out, "flacets: {}", p.flacets().len()).unwrap();
    writeln!(out, "dimension: {}", p.dimension()).unwrap();
    print!("{out}");
    Ok(())
}

pub fn flacets(m: Matroid, caps: &Caps) -> Result<(), CliError> {
    let p = BasePolytope::new(m, caps)?;
    let mut out = format!("flacets: {}\n", p.flacets().len());
    for f in p.flacets() {
        writeln!(out, "x{} <= {}", f.flat, f.rhs).unwrap();
    }
    let disagreements = &p.flacet_report().disagreements;
    if !disagreements.is_empty() {
        writeln!(out, "fast-path disagreements: {}", disagreements.len()).unwrap();
    }
    print!("{out}");
    Ok(())
}

pub fn hitting(m: Matroid, caps: &Caps) -> Result<(), CliError> {
    let p = BasePolytope::new(m, caps)?;
    let greedy = greedy_hitting_family(&p);
    let (exact, family) = match minimum_hitting_family(&p) {
        Ok(f) => (f.len().to_string(), f),
        Err(CoreError::ResourceLimit { .. }) => ("unavailable".to_string(), greedy.clone()),
        Err(e) => return Err(e.into()),
    };
    let mut out = format!("greedy={} exact={exact}\n", greedy.len());
    for b in family.bases() {
        writeln!(out, "{b}").unwrap();
    }
    print!("{out}");
    Ok(())
}

pub fn slack(m: Matroid, caps: &Caps, output: Option<&Path>) -> Result<(), CliError> {
    let p = BasePolytope::new(m, caps)?;
    write_output(output, &p.slack_matrix().to_csv())
}

pub fn protocol_check(m: Matroid, caps: &Caps, mode: Option<FamilyMode>) -> Result<(), CliError> {
    let p = BasePolytope::new(m, caps)?;
    let (_, fam, echo) = select_family(&p, mode)?;
    println!("{echo}");
    let (rows, cols) = p.slack_matrix().shape();
    match check_protocol(&p, &fam, &CanonicalOrdering)? {
        Ok(_) => {
            println!("PASS {rows}x{cols} grid checked");
            Ok(())
        }
        Err(d) => {
            println!(
                "FAIL flacet {} basis {}: expectation {}, slack {}",
                d.flacet.flat, d.basis, d.expected, d.slack
            );
            Err(CliError::Verification("protocol expectation differs from slack".into()))
        }
    }
}

pub fn build_xf(m: Matroid, caps: &Caps, mode: Option<FamilyMode>, output: Option<&PathBuf>) -> Result<(), CliError> {
    let p = BasePolytope::new(m, caps)?;
    let built = build(&p, mode)?;
    let bound = (1u128 << built.bits) + 2 * p.n() as u128;
    println!("{}", built.echo);
    println!("size: {}", built.ef.size());
    println!("num_y: {}", built.ef.num_y());
    println!("bits: {}", built.bits);
    println!("bound 2^bits+2n: {bound}");
    let text = built.ef.to_text();
    match output {
        Some(path) => {
            write_output(Some(path), &text)?;
            println!("written: {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

pub fn verify_xf(
    m: Matroid,
    caps: &Caps,
    mode: Option<FamilyMode>,
    objectives: usize,
    seed: u64,
) -> Result<(), CliError> {
    let p = BasePolytope::new(m, caps)?;
    let built = build(&p, mode)?;
    println!("{}", built.echo);
    match verify_vertex_lifting(&p, &built.ef, &built.fac) {
        LiftingCheck::AllLifted { bases } => println!("lifting: PASS ({bases} bases)"),
        LiftingCheck::Violated { basis, constraint } => {
            println!("lifting: FAIL basis {basis} violates {constraint:?}");
            return Err(CliError::Verification("vertex lifting".into()));
        }
    }
    let objs = random_objectives(p.n(), objectives, seed);
    match verify_optimization_equivalence(&p, &built.ef, &objs)? {
        OptimizationCheck::AllMatch { objectives } => {
            println!("optimization: PASS ({objectives} objectives, seed {seed})")
        }
        OptimizationCheck::Mismatch { objective, formulation, vertices } => {
            println!("optimization: FAIL objective {objective:?}: formulation {formulation}, vertices {vertices}");
            return Err(CliError::Verification("optimization equivalence".into()));
        }
        OptimizationCheck::OutsidePolytope { objective, point } => {
            let point: Vec<String> = point.iter().map(ToString::to_string).collect();
            println!("optimization: FAIL objective {objective:?}: optimum ({}) is outside B(M)", point.join(", "));
            return Err(CliError::Verification("optimization equivalence".into()));
        }
    }
    println!("PASS");
    Ok(())
}

pub fn bench(family: BenchFamily, min_n: usize, max_n: usize, caps: &Caps) -> Result<(), CliError> {
    if min_n < 3 || min_n > max_n {
        return Err(CliError::Validation(format!("need 3 <= min-n <= max-n, got {min_n}..{max_n}")));
    }
    println!("n\tflacets\th_greedy\th_exact\tnum_y\tsize\ttrivial_facets");
    for n in min_n..=max_n {
        let m = match family {
            BenchFamily::CompleteGraphs => Matroid::graphic(Graph::complete(n))?,
            BenchFamily::UniformRankTwo => Matroid::uniform(2, n)?,
        };
        let p = BasePolytope::new(m, caps)?;
        let greedy = greedy_hitting_family(&p);
        let exact = match minimum_hitting_family(&p) {
            Ok(f) => Some(f),
            Err(CoreError::ResourceLimit { .. }) => None,
            Err(e) => return Err(e.into()),
        };
        let fac = match family {
            BenchFamily::CompleteGraphs => factorize_one_bit(&p)?.1,
            BenchFamily::UniformRankTwo => factorize_from_transcripts(&p, exact.as_ref().unwrap_or(&greedy))?,
        };
        let ef = build_extended_formulation(&p, &fac);
        println!(
            "{n}\t{}\t{}\t{}\t{}\t{}\t{}",
            p.flacets().len(),
            greedy.len(),
            exact.map_or("-".to_string(), |f| f.len().to_string()),
            ef.num_y(),
            ef.size(),
            p.flacets().len() + 2 * p.n(),
        );
    }
    Ok(())
}
