//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use num_traits::{One, Signed, Zero};
use psat_cli::format::{parse, render};
use psat_core::lp::{lp_optimize_both, LpProblem};
use psat_core::matrices::{
    build_k, build_v, build_w, build_z, c_vector, clause_truth_vector, expected_assignment, expected_bias,
    weight_permutation,
};
use psat_core::oracle::{exhaustive_sat, support_enumeration_optimize};
use psat_core::problems::{
    coherence, coherence_product_witness, coherence_via_bias, entail, fiber_contains, fiber_translate,
    kernel_containment, psat, sat_via_psat,
};
use psat_core::{
    q, AssignmentSpace, Clause, ClauseProbabilityTarget, ConjunctiveForm, Distribution, Error, FiberVector,
    Literal, ProbabilisticAssignment, Rational,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("matrix identities", matrix_identities),
        ("c_n closed form vs column sums", c_consistency),
        ("coherence totality and bias form", coherence_totality),
        ("PSAT at certainty equals SAT", psat_equals_sat),
        ("three-valued collapse to SAT", multivalued_collapse),
        ("LP vs oracle", lp_vs_oracle),
        ("entailment fixture", entailment_fixture),
        ("fiber invariance", fiber_invariance),
        ("obstruction", obstruction),
        ("CLI round-trip and exit codes", cli_round_trip),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

fn space(n: usize, k: u32) -> AssignmentSpace {
    AssignmentSpace::new(n, k).unwrap()
}

fn random_form(rng: &mut ChaCha8Rng, n: usize, m: usize, width: usize) -> ConjunctiveForm {
    let clauses = (0..m)
        .map(|_| {
            let w = rng.gen_range(1..=width);
            Clause::new((0..w).map(|_| Literal { variable: rng.gen_range(0..n), negated: rng.gen() })).unwrap()
        })
        .collect();
    ConjunctiveForm::new(n, clauses).unwrap()
}

fn fraction(rng: &mut ChaCha8Rng, den: i64) -> Rational {
    Rational::new(rng.gen_range(0..=den).into(), den.into())
}

fn random_distribution(rng: &mut ChaCha8Rng, space: AssignmentSpace, strictly_positive: bool) -> Distribution {
    let lo = if strictly_positive { 1 } else { 0 };
    let mut raw: Vec<i64> = (0..space.len()).map(|_| rng.gen_range(lo..12)).collect();
    if raw.iter().all(|&r| r == 0) {
        raw[0] = 1;
    }
    let total: i64 = raw.iter().sum();
    Distribution::new(space, raw.iter().map(|&r| Rational::new(r.into(), total.into())).collect()).unwrap()
}

fn matrix_identities() -> Outcome {
    let cases: Vec<(usize, u32)> = (1..=8).map(|n| (n, 2)).chain((1..=4).map(|n| (n, 3))).collect();
    for &(n, k) in &cases {
        let s = space(n, k);
        let (w, kern) = (build_w(&s), build_k(&s));
        ensure!(w.mul(&kern).unwrap().is_zero(), "W K != 0 at n={n}, k={k}");
        ensure!(w.rank() == n, "rank W != n at n={n}, k={k}");
        ensure!(kern.rank() == s.len() - n, "rank K != k^n - n at n={n}, k={k}");

        let perm = w.select_columns(weight_permutation(&s).order());
        ensure!((0..n).all(|i| perm[(i, 0)].is_zero()), "first permuted column is not 0 at n={n}, k={k}");
        for i in 0..n {
            for j in 0..n {
                let d = &perm[(i, 1 + j)];
                ensure!(d.is_positive() == (i == j) && (i == j || d.is_zero()), "D block is not diagonal at n={n}, k={k}");
            }
        }
        if k == 2 {
            let h_ok = (n + 1..s.len()).all(|j| (0..n).filter(|&i| perm[(i, j)].is_one()).count() >= 2);
            ensure!(h_ok, "H block has a column of weight < 2 at n={n}");
        }
    }
    Ok(format!("{} (n, k) pairs", cases.len()))
}

fn c_consistency() -> Outcome {
    for n in 1..=8 {
        let s = space(n, 2);
        ensure!(c_vector(&s).unwrap() == build_k(&s).column_sums(), "mismatch at n={n}");
    }
    Ok("n = 1..8".into())
}

fn coherence_totality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for trial in 0..100 {
        let n = rng.gen_range(1..=6);
        let s = space(n, 2);
        let den = rng.gen_range(1..=17);
        let values: Vec<Rational> = (0..n).map(|_| fraction(&mut rng, den)).collect();
        let x = ProbabilisticAssignment::new(values.clone()).unwrap();

        let via_w = coherence(&x, &s).unwrap();
        let via_z = coherence_via_bias(&x, &s).unwrap();
        ensure!(via_w.is_some() && via_z.is_some(), "trial {trial}: infeasible for x = {values:?}");
        ensure!(expected_assignment(via_w.as_ref().unwrap()) == values, "trial {trial}: LP witness misses x");

        let u = coherence_product_witness(&x, &s).unwrap();
        ensure!(expected_assignment(&u) == values, "trial {trial}: W u != x");
        let bias: Vec<Rational> = values.iter().map(|v| v * Rational::from_integer(2.into()) - Rational::one()).collect();
        ensure!(expected_bias(&u).unwrap() == bias, "trial {trial}: Z u != 2x - 1");
        ensure!(build_z(&s).unwrap().mul_vec(via_z.unwrap().weights()).unwrap() == bias, "trial {trial}: bias witness");
    }
    Ok("100 points".into())
}

fn psat_equals_sat() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut sat, total) = (0, 240);
    for trial in 0..total {
        let n = rng.gen_range(1..=6);
        let m = rng.gen_range(1..=12);
        let form = random_form(&mut rng, n, m, 3);
        let lp = sat_via_psat(&form, &space(n, 2)).unwrap();
        ensure!(lp == exhaustive_sat(&form, 2).unwrap(), "trial {trial}: disagreement on {form}");
        sat += lp as usize;
    }
    Ok(format!("{total} forms, {sat} satisfiable, 0 disagreements"))
}

fn multivalued_collapse() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut sat, total) = (0, 120);
    for trial in 0..total {
        let n = rng.gen_range(1..=4);
        let m = rng.gen_range(1..=8);
        let form = random_form(&mut rng, n, m, 3);
        let lp = sat_via_psat(&form, &space(n, 3)).unwrap();
        ensure!(lp == exhaustive_sat(&form, 2).unwrap(), "trial {trial}: disagreement on {form}");
        sat += lp as usize;
    }
    Ok(format!("{total} forms, {sat} satisfiable, 0 disagreements"))
}

fn lp_vs_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut feasible, total) = (0, 80);
    for trial in 0..total {
        let n = rng.gen_range(1..=6);
        let m = rng.gen_range(1..=3);
        let s = space(n, 2);
        let form = random_form(&mut rng, n, m, 3);
        let v = build_v(&form, &s).unwrap();
        // Half the targets come from a real distribution so both outcomes
        // are well represented.
        let centre: Vec<Rational> = if rng.gen_bool(0.5) {
            v.mul_vec(random_distribution(&mut rng, s, false).weights()).unwrap()
        } else {
            (0..m).map(|_| fraction(&mut rng, 10)).collect()
        };
        let (lower, upper): (Vec<Rational>, Vec<Rational>) = centre
            .iter()
            .map(|c| {
                if rng.gen_bool(0.5) {
                    (c.clone(), c.clone())
                } else {
                    let slack = fraction(&mut rng, 5);
                    ((c - &slack).max(Rational::zero()), (c + slack).min(Rational::one()))
                }
            })
            .unzip();
        let z: Vec<Rational> = (0..s.len()).map(|_| Rational::new(rng.gen_range(-2i64..=2).into(), 3.into())).collect();

        let problem = LpProblem::new(z.clone(), v.clone(), lower.clone(), upper.clone()).unwrap();
        let lp = lp_optimize_both(&problem);
        let oracle = support_enumeration_optimize(&v, &lower, &upper, &z);
        match (lp, oracle) {
            (Ok(a), Ok(b)) => {
                ensure!(a == b, "trial {trial}: LP {a} vs oracle {b}");
                feasible += 1;
            }
            (Err(Error::Infeasible), Err(Error::Infeasible)) => {}
            (a, b) => return Err(format!("trial {trial}: LP {a:?} vs oracle {b:?}")),
        }
    }
    Ok(format!("{total} instances, {feasible} feasible, values identical"))
}

fn nilsson() -> (ConjunctiveForm, ClauseProbabilityTarget, Clause) {
    let form = ConjunctiveForm::new(2, vec![Clause::from_dimacs(&[1]).unwrap(), Clause::from_dimacs(&[-1, 2]).unwrap()]).unwrap();
    let target = ClauseProbabilityTarget::exact(vec![q("7/10"), q("4/5")]).unwrap();
    (form, target, Clause::from_dimacs(&[2]).unwrap())
}

fn entailment_fixture() -> Outcome {
    let (form, target, goal) = nilsson();
    let s = space(2, 2);
    let i = entail(&form, &target, &goal, &s).unwrap();
    ensure!(i.lo() == &q("1/2") && i.hi() == &q("4/5"), "interval {i}");
    let v = build_v(&form, &s).unwrap();
    let oracle = support_enumeration_optimize(&v, &target.lower(), &target.upper(), &clause_truth_vector(&goal, &s).unwrap()).unwrap();
    ensure!(oracle == i, "oracle gives {oracle}");
    for y in ["1/2", "13/20", "4/5"] {
        let extended = form.with_clause(goal.clone()).unwrap();
        let t = target.with_bound(q(y), q(y)).unwrap();
        ensure!(psat(&extended, &t, &s).unwrap().is_some(), "extension at {y} infeasible");
    }
    let t = target.with_bound(q("17/20"), q("17/20")).unwrap();
    ensure!(psat(&form.with_clause(goal).unwrap(), &t, &s).unwrap().is_none(), "17/20 outside the interval is feasible");
    Ok(format!("{i}, extension feasible at 1/2, 13/20, 4/5"))
}

fn fiber_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut moves = 0;
    for n in 3..=5 {
        let s = space(n, 2);
        let kern = build_k(&s);
        let c = kern.column_sums();
        for trial in 0..20 {
            let u0 = random_distribution(&mut rng, s, true);
            // Random direction, made orthogonal to c through its first
            // coordinate (c_0 = 1), then scaled to keep u0 + K w >= 0.
            let mut w: Vec<Rational> = (0..c.len()).map(|_| Rational::new(rng.gen_range(-6i64..=6).into(), 1.into())).collect();
            let rest: Rational = c.iter().zip(&w).skip(1).map(|(a, b)| a * b).sum();
            w[0] = -rest;
            let shift = kern.mul_vec(&w).unwrap();
            let room = u0
                .weights()
                .iter()
                .zip(&shift)
                .filter(|(_, d)| d.is_negative())
                .map(|(u, d)| u / -d)
                .min()
                .unwrap_or_else(Rational::one);
            let t = room * Rational::new(rng.gen_range(1i64..=4).into(), 4.into());
            let fiber = FiberVector::new(w.iter().map(|x| x * &t).collect());
            ensure!(fiber_contains(&u0, &fiber).unwrap(), "n={n} trial {trial}: constructed w not in fiber");
            let u1 = fiber_translate(&u0, &fiber).unwrap();
            ensure!(expected_assignment(&u1) == expected_assignment(&u0), "n={n} trial {trial}: W u changed");
            ensure!(u1.weights().iter().all(|x| !x.is_negative()), "n={n} trial {trial}: negative weight");
            ensure!(u1.weights().iter().sum::<Rational>().is_one(), "n={n} trial {trial}: mass changed");
            moves += 1;
        }
    }
    Ok(format!("{moves} moves at n = 3..5"))
}

fn obstruction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut corpus: Vec<ConjunctiveForm> = (0..150)
        .map(|_| {
            let n = rng.gen_range(1..=5);
            let m = rng.gen_range(1..=6);
            random_form(&mut rng, n, m, 3)
        })
        .collect();
    corpus.extend(fixtures().iter().map(|(_, text)| parse(text).unwrap().form));
    let mut checked = 0;
    for form in &corpus {
        let zero_satisfies = form.clauses().iter().any(|c| c.literals().iter().any(|l| l.negated));
        if zero_satisfies {
            ensure!(!kernel_containment(form, &space(form.n(), 2)).unwrap(), "containment holds for {form}");
            checked += 1;
        }
    }
    ensure!(checked > 0, "no form in the corpus has a clause satisfied by the zero assignment");
    Ok(format!("{checked} of {} forms qualify, containment fails on all", corpus.len()))
}

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn fixtures() -> Vec<(PathBuf, String)> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(fixture_dir()).unwrap().map(|e| e.unwrap().path()).collect();
    paths.sort();
    paths.into_iter().map(|p| {
        let text = std::fs::read_to_string(&p).unwrap();
        (p, text)
    }).collect()
}

fn psat_bin(args: &[&str]) -> (i32, Vec<u8>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_psat")).args(args).output().expect("spawn psat");
    (out.status.code().unwrap_or(-1), out.stdout, out.stderr)
}

fn cli_round_trip() -> Outcome {
    let files = fixtures();
    let (mut sat, mut unsat) = (0, 0);
    for (path, text) in &files {
        let p = path.to_str().unwrap();
        let inst = parse(text).map_err(|e| format!("{p}: {e}"))?;
        ensure!(&render(&inst) == text, "{p} does not round-trip");
        ensure!(parse(&render(&inst)).unwrap() == inst, "{p} does not reparse identically");

        let expected = if exhaustive_sat(&inst.form, 2).unwrap() { 0 } else { 1 };
        let (code, _, _) = psat_bin(&["sat", p]);
        ensure!(code == expected, "sat on {p} exited {code}, expected {expected}");
        if expected == 0 { sat += 1 } else { unsat += 1 }

        let (code, out, _) = psat_bin(&["verify", p]);
        ensure!(code == 0, "verify on {p} exited {code}: {}", String::from_utf8_lossy(&out));
    }
    ensure!(sat > 0 && unsat > 0, "corpus lacks a satisfiable or an unsatisfiable fixture");
    Ok(format!("{} fixtures, {sat} sat / {unsat} unsat, verify clean", files.len()))
}

fn determinism() -> Outcome {
    let mut invocations: Vec<Vec<String>> = Vec::new();
    for (path, text) in fixtures() {
        let p = path.to_string_lossy().into_owned();
        let has_goal = parse(&text).unwrap().goal.is_some();
        for json in [false, true] {
            let mut cmds = vec!["solve", "sat", "verify"];
            if has_goal {
                cmds.push("entail");
            }
            for cmd in cmds {
                let mut args = if json { vec!["--json".to_string()] } else { vec![] };
                args.extend([cmd.to_string(), p.clone()]);
                invocations.push(args);
            }
        }
    }
    for which in ["W", "K", "Z", "c"] {
        invocations.push(["matrix", "--n", "3", "--which", which].map(String::from).to_vec());
    }
    invocations.push(["matrix", "--n", "2", "--k", "3", "--which", "K"].map(String::from).to_vec());
    invocations.push(["coherence", "1/3,2/7,0.25"].map(String::from).to_vec());
    invocations.push(["--json", "coherence", "1/2,1/2,1/2,1/2"].map(String::from).to_vec());

    for args in &invocations {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = psat_bin(&args);
        for _ in 0..2 {
            ensure!(psat_bin(&args) == first, "output of {args:?} differs between runs");
        }
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = psat_cli::run(std::iter::once("psat").chain(args.iter().copied()), &mut out, &mut err);
        ensure!((code, out, err) == first, "in-process run of {args:?} differs from the binary");
    }
    Ok(format!("{} invocations, 3 runs each, byte-identical", invocations.len()))
}
