//! End-to-end acceptance run. Prints one line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::Zero;
use pgl2a::abgrp::{smith_normal_form, ChainComplexFg, FgAbGroup, FreeChainComplex, IntMatrix, PresentedGroup, SparseMatrix};
use pgl2a::coeffsys::{
    degree_zero_system, e1_page, page_homology, run_concrete, run_symbolic, run_symbolic_with, symbolic_system,
    Battery, ConcreteRun, Instantiation, MapTag, Resolution, SymbolicRun, Verdict,
};
use pgl2a::curve::{CurveError, WeierstrassCurve};
use pgl2a::domain::{build_domain, build_domain_with, Attachment, VertexId};
use pgl2a::exec::{set_strategy, Strategy};
use pgl2a::field::make_field;
use pgl2a::grouph::{
    abelianization, additive_group, bar_homology, cyclic, gl2, pgl2, quadratic_units_mod_units, triangular_group,
    unit_group, Ceilings, FiniteGroup,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

const DEPTHS: [usize; 4] = [1, 2, 5, 10];

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn closed_form(inst: &Instantiation, shape: (usize, usize, usize)) -> FgAbGroup {
    let mut parts = Vec::new();
    parts.extend(std::iter::repeat_n(inst.pgl2.clone(), shape.0));
    parts.extend(std::iter::repeat_n(inst.units.clone(), shape.1));
    parts.extend(std::iter::repeat_n(inst.quad.clone(), shape.2));
    FgAbGroup::sum_all(&parts)
}

fn theorem_reproduction() -> Outcome {
    let mut checked = 0;
    for c in corpus() {
        let shape = brute_shape(c.curve.field(), c.a);
        for n in DEPTHS {
            let r = run_symbolic(&SymbolicRun::for_curve(&c.curve, n, 5)).map_err(|e| e.to_string())?;
            ensure(r.degrees.len() == 10, || format!("{}: expected 10 entries", c.name))?;
            for d in &r.degrees {
                let inst = Instantiation::battery(d.battery.unwrap(), Resolution::ZeroMap);
                let expected = closed_form(&inst, shape);
                ensure(d.verdict == Verdict::Match && d.assembled == expected && d.rhs_group == expected, || {
                    format!("{} N={n} i={}: assembled {}, expected {expected}", c.name, d.i, d.assembled)
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (curve, depth, battery, degree) cases"))
}

fn subtree_propositions() -> Outcome {
    let mut checked = 0;
    for c in corpus() {
        let summary = c.curve.classify_all();
        let tree = build_domain(&summary, 3).unwrap();
        for res in [Resolution::ZeroMap, Resolution::Iso] {
            let mut run = SymbolicRun::for_curve(&c.curve, 3, 5);
            run.resolution = res;
            let r = run_symbolic(&run).map_err(|e| e.to_string())?;
            for d in &r.degrees {
                for s in &d.subtrees {
                    ensure(s.ok, || format!("{} line {} case {} i={}: H0 {} H1 {}", c.name, s.line, s.case, d.i, s.h0, s.h1))?;
                    checked += 1;
                }
            }
            // Dense route on every subtree page as a second opinion.
            for b in Battery::ALL {
                let inst = Instantiation::battery(b, res);
                for lc in &summary.lines {
                    let sub = tree.subtree(&lc.line).unwrap();
                    let page = e1_page(&symbolic_system(&sub, 1).unwrap(), &inst);
                    let expected = match lc.case.number() {
                        1 => inst.quad.clone(),
                        2 => inst.pgl2.clone(),
                        _ => inst.units.clone(),
                    };
                    ensure(page.homology_at(0) == expected && page.homology_at(1).is_trivial(), || {
                        format!("{} line {}: dense route disagrees", c.name, lc.line)
                    })?;
                }
            }
        }
    }
    Ok(format!("{checked} subtree pages under both resolutions"))
}

fn degree_zero_row() -> Outcome {
    let inst = Instantiation::battery(Battery::Primary, Resolution::ZeroMap);
    let mut checked = 0;
    for c in corpus() {
        for n in DEPTHS {
            let tree = build_domain(&c.curve.classify_all(), n).unwrap();
            let page = e1_page(&degree_zero_system(&tree), &inst);
            let fast = page_homology(&page);
            ensure(fast.h0 == FgAbGroup::free(1) && fast.h1.is_trivial(), || format!("{} N={n}", c.name))?;
            ensure(page.homology_at(0) == fast.h0 && page.homology_at(1) == fast.h1, || {
                format!("{} N={n}: routes disagree", c.name)
            })?;
            checked += 1;
        }
    }
    Ok(format!("H0 = Z, H1 = 0 on {checked} trees"))
}

fn counting_identities() -> Outcome {
    for c in corpus() {
        let f = c.curve.field();
        let s = c.curve.classify_all();
        let points = brute_point_count(f, c.a);
        let finite = |n: u8| {
            s.lines
                .iter()
                .filter(|l| l.line != pgl2a::curve::Line::Infinity && l.case.number() == n)
                .count()
        };
        ensure(points == 1 + finite(2) + 2 * finite(3), || format!("{}: |E| = {points}", c.name))?;
        ensure(points == c.curve.enumerate_points().len(), || format!("{}: enumeration", c.name))?;
        let torsion = s.two_torsion().len();
        ensure([1, 2, 4].contains(&torsion), || format!("{}: {torsion} two-torsion points", c.name))?;
        for n in DEPTHS {
            let tree = build_domain(&s, n).unwrap();
            ensure(tree.cusp_count() == points, || format!("{}: cusps at N={n}", c.name))?;
        }
        let q = f.order() as u64;
        ensure(abs_diff(points, q as usize + 1) <= isqrt_floor_times_two(q), || format!("{}: Hasse", c.name))?;
    }
    Ok(format!("{} curves", corpus().len()))
}

fn linear_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20261015);
    for t in 0..500 {
        let (r, c) = (rng.random_range(1..=5), rng.random_range(1..=5));
        let m = random_matrix(&mut rng, r, c, 12);
        let f = smith_normal_form(&m);
        ensure(f.u.mul(&m).mul(&f.v) == f.s, || format!("SNF {t}: U M V != S"))?;
        ensure(
            f.u.mul(&f.u_inv) == IntMatrix::identity(r) && f.v.mul(&f.v_inv) == IntMatrix::identity(c),
            || format!("SNF {t}: not unimodular"),
        )?;
        let d = f.diag();
        ensure(d.windows(2).all(|w| (&w[1] % &w[0]).is_zero()), || format!("SNF {t}: divisibility"))?;
        ensure(d == invariant_factors_by_minors(&m), || format!("SNF {t}: minors oracle disagrees"))?;
        for i in 0..r {
            for j in 0..c {
                ensure((i == j && i < f.rank) != f.s[(i, j)].is_zero(), || format!("SNF {t}: shape"))?;
            }
        }
    }
    for t in 0..100 {
        let top = rng.random_range(1..=4);
        let k = random_complex(&mut rng, top);
        let groups = k.dims.iter().map(|&d| PresentedGroup::free(d)).collect();
        let dense = ChainComplexFg::new(groups, k.boundaries.clone()).map_err(|e| format!("complex {t}: {e}"))?;
        let sparse = FreeChainComplex::new(k.boundaries.iter().map(SparseMatrix::from_dense).collect())
            .map_err(|e| format!("complex {t}: {e}"))?;
        for n in 0..=top {
            ensure(dense.homology_at(n) == k.homology[n], || {
                format!("complex {t} H_{n}: dense {} vs {}", dense.homology_at(n), k.homology[n])
            })?;
            ensure(sparse.homology_at(n) == k.homology[n], || {
                format!("complex {t} H_{n}: sparse {} vs {}", sparse.homology_at(n), k.homology[n])
            })?;
        }
    }
    Ok("500 factorizations, 100 complexes".into())
}

fn stabilizer_zoo() -> Vec<(String, Arc<FiniteGroup>)> {
    let mut out = Vec::new();
    for (p, k) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1)] {
        let f = make_field(p, k).unwrap();
        let name = format!("F{}", f.order());
        let mut push = |label: &str, g: Result<Arc<FiniteGroup>, _>| {
            if let Ok(g) = g {
                out.push((format!("{label} {name}"), g));
            }
        };
        push("units", unit_group(&f));
        push("additive", additive_group(&f));
        push("quad", quadratic_units_mod_units(&f).map(|q| q.group));
        push("PGL2", pgl2(&f));
        push("GL2", gl2(&f));
        for n in 0..=3 {
            if let Ok(t) = triangular_group(&f, n) {
                push(&format!("tri{n}"), Ok(t.group.clone()));
                push(&format!("tri{n}/scalars"), t.modulo_scalars().map(|q| q.group));
            }
        }
    }
    out.retain(|(_, g)| g.order() <= 24);
    out
}

fn group_homology_oracles() -> Outcome {
    let c = Ceilings::default();
    for n in 1..=8usize {
        for q in 0..=3 {
            let h = bar_homology(&cyclic(n), q, &c).map_err(|e| e.to_string())?;
            let expected = match q {
                0 => FgAbGroup::free(1),
                _ if q % 2 == 1 => FgAbGroup::cyclic(n as u64),
                _ => FgAbGroup::trivial(),
            };
            ensure(h == expected, || format!("H_{q}(Z/{n}) = {h}"))?;
        }
    }
    let zoo = stabilizer_zoo();
    for (name, g) in &zoo {
        let h1 = bar_homology(g, 1, &c).map_err(|e| e.to_string())?;
        ensure(h1 == abelianization(g), || format!("{name}: H1 {h1} vs abelianization {}", abelianization(g)))?;
    }
    let s3 = pgl2(&make_field(2, 1).unwrap()).unwrap();
    let h = bar_homology(&s3, 1, &c).unwrap();
    ensure(h == FgAbGroup::cyclic(2), || format!("H1(PGL2(F2)) = {h}"))?;
    Ok(format!("cyclic closed forms and {} stabilizer groups", zoo.len()))
}

fn concrete_experiment() -> Outcome {
    let schema_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../cli/schema/report.schema.json");
    let schema: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(schema_path).map_err(|e| e.to_string())?).unwrap();
    let validator = jsonschema::validator_for(&schema).map_err(|e| e.to_string())?;
    let mut runs = 0;
    for c in corpus().into_iter().filter(|c| c.curve.field().order() == 2) {
        for n in 1..=3 {
            let run = ConcreteRun::new(c.curve.clone(), n, 2);
            let first = run_concrete(&run).map_err(|e| format!("{} N={n}: {e}", c.name))?;
            set_strategy(Strategy::Sequential);
            let second = run_concrete(&run);
            set_strategy(Strategy::Parallel);
            let second = second.map_err(|e| e.to_string())?;
            let a = serde_json::to_string(&first).unwrap();
            let b = serde_json::to_string(&second).unwrap();
            ensure(a == b, || format!("{} N={n}: runs differ", c.name))?;
            let doc: serde_json::Value = serde_json::from_str(&a).unwrap();
            let errors: Vec<String> = validator.iter_errors(&doc).map(|e| e.to_string()).collect();
            ensure(errors.is_empty(), || format!("{} N={n}: schema {errors:?}", c.name))?;
            ensure(first.degrees.len() == 2, || format!("{} N={n}: degrees", c.name))?;
            let m = first.measurements.as_ref().unwrap();
            ensure(m.nessus.len() == 2 * n, || format!("{} N={n}: nessus flags", c.name))?;
            runs += 1;
        }
    }
    ensure(runs > 0, || "no F2 curves in the corpus".into())?;
    Ok(format!("{runs} concrete runs, schema-valid and deterministic"))
}

fn robustness() -> Outcome {
    for (p, a) in [(5, [0, 0, 0, 0, 0]), (2, [0, 0, 0, 0, 0]), (3, [0, 1, 0, 0, 0]), (7, [0, 0, 0, -3, 2])] {
        let f = Arc::new(make_field(p, 1).unwrap());
        ensure(WeierstrassCurve::from_ints(f, a).unwrap_err() == CurveError::Singular, || {
            format!("{a:?} over F{p} accepted")
        })?;
    }
    for c in corpus() {
        let run = SymbolicRun::for_curve(&c.curve, 2, 3);
        let r = run_symbolic_with(&run, |_, sys| {
            let tree = sys.tree().clone();
            let e = (0..tree.edges().len())
                .find(|&e| {
                    let (t, h) = tree.edges()[e];
                    matches!(tree.vertex(t), VertexId::V(_))
                        && matches!(tree.vertex(h), VertexId::C(..))
                        && sys.incidence(e).toward_head == MapTag::ZeroMap
                })
                .expect("every curve has a case 2 line with a cusp");
            sys.set_map(e, false, MapTag::ZeroMap);
        })
        .map_err(|e| e.to_string())?;
        ensure(r.has_mismatch(), || format!("{}: corruption not detected", c.name))?;
    }
    let _ = build_domain_with(&corpus()[0].curve.classify_all(), 2, Attachment::Second).unwrap();
    Ok("singular curves rejected, corruption detected on every curve".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("symbolic theorem reproduction", theorem_reproduction, Duration::from_secs(10)),
        ("subtree propositions", subtree_propositions, Duration::from_secs(5)),
        ("degree-zero row", degree_zero_row, Duration::from_secs(1)),
        ("counting identities", counting_identities, Duration::from_secs(1)),
        ("exact linear algebra battery", linear_algebra, Duration::from_secs(30)),
        ("finite-group homology oracles", group_homology_oracles, Duration::from_secs(120)),
        ("concrete-mode experiment", concrete_experiment, Duration::from_secs(300)),
        ("robustness", robustness, Duration::from_secs(1)),
    ];
    let mut failed = 0;
    for (i, (name, f, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let t = start.elapsed();
        let timing = format!("{:.2}s of {}s", t.as_secs_f64(), budget.as_secs());
        let slow = if t > *budget { ", over time budget" } else { "" };
        match outcome {
            Ok(detail) => println!("criterion {} PASS {name}: {detail} ({timing}{slow})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL {name}: {detail} ({timing}{slow})", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
