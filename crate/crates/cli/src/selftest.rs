//! Oracle batteries runnable from the binary.

use std::sync::Arc;

use pgl2a::abgrp::{smith_normal_form, FgAbGroup, Int, IntMatrix};
use pgl2a::coeffsys::{run_symbolic, DecompositionReport, Resolution, SymbolicRun};
use pgl2a::curve::{ClassificationSummary, WeierstrassCurve};
use pgl2a::domain::Attachment;
use pgl2a::field::make_field;
use pgl2a::grouph::{
    abelianization, bar_homology, cyclic, gl2, pgl2, quadratic_units_mod_units, triangular_group,
    unit_group, Ceilings, FiniteGroup,
};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub ok: bool,
    pub detail: String,
}

fn check(name: &'static str, result: Result<String, String>) -> Check {
    match result {
        Ok(detail) => Check { name, ok: true, detail },
        Err(detail) => Check { name, ok: false, detail },
    }
}

pub fn run_all(seed: u64) -> Vec<Check> {
    vec![
        check("snf-random", snf_battery(seed, 200)),
        check("cyclic-homology", cyclic_closed_forms()),
        check("abelianization", abelianization_battery()),
        check("subtrees", subtree_battery()),
        check("invariance", invariance_battery()),
    ]
}

pub fn render(checks: &[Check]) -> String {
    checks
        .iter()
        .map(|c| format!("{} {}: {}\n", if c.ok { "ok  " } else { "FAIL" }, c.name, c.detail))
        .collect()
}

fn snf_battery(seed: u64, count: usize) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..count {
        let rows = rng.random_range(1..=6);
        let cols = rng.random_range(1..=6);
        let m = IntMatrix::from_fn(rows, cols, |_, _| Int::from(rng.random_range(-9i64..=9)));
        let f = smith_normal_form(&m);
        if f.u.mul(&m).mul(&f.v) != f.s {
            return Err(format!("case {t}: U M V != S"));
        }
        if f.u.mul(&f.u_inv) != IntMatrix::identity(rows) || f.v.mul(&f.v_inv) != IntMatrix::identity(cols) {
            return Err(format!("case {t}: transform not unimodular"));
        }
        for i in 0..rows {
            for j in 0..cols {
                let x = &f.s[(i, j)];
                let on_diag = i == j && i < f.rank;
                if on_diag == x.is_zero() || (on_diag && *x < Int::zero()) {
                    return Err(format!("case {t}: bad entry at ({i},{j})"));
                }
            }
        }
        let d = f.diag();
        if d.windows(2).any(|w| !(&w[1] % &w[0]).is_zero()) {
            return Err(format!("case {t}: divisibility fails"));
        }
    }
    Ok(format!("{count} factorizations"))
}

fn cyclic_closed_forms() -> Result<String, String> {
    let c = Ceilings::default();
    for n in 1..=8usize {
        let g = cyclic(n);
        for q in 0..=3 {
            let h = bar_homology(&g, q, &c).map_err(|e| e.to_string())?;
            let expected = if q == 0 {
                FgAbGroup::free(1)
            } else if q % 2 == 1 {
                FgAbGroup::cyclic(n as u64)
            } else {
                FgAbGroup::trivial()
            };
            if h != expected {
                return Err(format!("H_{q}(Z/{n}) = {h}, expected {expected}"));
            }
        }
    }
    Ok("n <= 8, q <= 3".into())
}

fn stabilizer_groups() -> Result<Vec<(String, Arc<FiniteGroup>)>, String> {
    let e = |x: pgl2a::grouph::GroupError| x.to_string();
    let mut out = Vec::new();
    for p in [2u32, 3, 5] {
        let f = make_field(p, 1).map_err(|x| x.to_string())?;
        out.push((format!("units F{p}"), unit_group(&f).map_err(e)?));
        out.push((format!("quad F{p}"), quadratic_units_mod_units(&f).map_err(e)?.group));
        for n in 0..=3 {
            if let Ok(t) = triangular_group(&f, n) {
                out.push((format!("tri{n} F{p}"), t.group.clone()));
                out.push((format!("tri{n}/scalars F{p}"), t.modulo_scalars().map_err(e)?.group));
            }
        }
        out.push((format!("PGL2 F{p}"), pgl2(&f).map_err(e)?));
        if p <= 3 {
            out.push((format!("GL2 F{p}"), gl2(&f).map_err(e)?));
        }
    }
    let f4 = make_field(2, 2).map_err(|x| x.to_string())?;
    out.push(("units F4".into(), unit_group(&f4).map_err(e)?));
    out.retain(|(_, g)| g.order() <= 24);
    Ok(out)
}

fn abelianization_battery() -> Result<String, String> {
    let groups = stabilizer_groups()?;
    let c = Ceilings::default();
    for (name, g) in &groups {
        let h1 = bar_homology(g, 1, &c).map_err(|e| e.to_string())?;
        let ab = abelianization(g);
        if h1 != ab {
            return Err(format!("{name}: H_1 = {h1}, abelianization {ab}"));
        }
    }
    Ok(format!("{} groups of order <= 24", groups.len()))
}

fn corpus() -> Vec<WeierstrassCurve> {
    [(3, [0, 0, 0, -1, 0]), (5, [0, 0, 0, -1, 0]), (5, [0, 0, 0, 1, 1]), (2, [0, 0, 1, 0, 0])]
        .into_iter()
        .map(|(p, a)| WeierstrassCurve::from_ints(Arc::new(make_field(p, 1).unwrap()), a).unwrap())
        .collect()
}

fn subtree_battery() -> Result<String, String> {
    let mut summaries: Vec<ClassificationSummary> = corpus().iter().map(|c| c.classify_all()).collect();
    summaries.push(ClassificationSummary::synthetic(2, 2, 2));
    let mut count = 0;
    for s in &summaries {
        for r in [Resolution::ZeroMap, Resolution::Iso] {
            let mut run = SymbolicRun::new(s.clone(), 3, 2);
            run.resolution = r;
            let rep = run_symbolic(&run).map_err(|e| e.to_string())?;
            for d in &rep.degrees {
                for st in &d.subtrees {
                    if !st.ok {
                        return Err(format!("line {} (case {}) in degree {}: H_0 {} H_1 {}", st.line, st.case, d.i, st.h0, st.h1));
                    }
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} subtree pages"))
}

fn fingerprint(r: &DecompositionReport) -> Vec<(usize, FgAbGroup, bool)> {
    r.degrees
        .iter()
        .map(|d| (d.i, d.assembled.clone(), d.verdict == pgl2a::coeffsys::Verdict::Match))
        .collect()
}

fn invariance_battery() -> Result<String, String> {
    let e = |x: pgl2a::coeffsys::CoeffError| x.to_string();
    for c in corpus() {
        let s = c.classify_all();
        let base = run_symbolic(&SymbolicRun::new(s.clone(), 1, 3)).map_err(e)?;
        if !base.all_match() || base.degree_zero.h0 != FgAbGroup::free(1) || !base.degree_zero.h1.is_trivial() {
            return Err("base run does not match".into());
        }
        let fp = fingerprint(&base);
        for n in [2, 5, 10] {
            if fingerprint(&run_symbolic(&SymbolicRun::new(s.clone(), n, 3)).map_err(e)?) != fp {
                return Err(format!("depth {n} differs from depth 1"));
            }
        }
        let mut second = SymbolicRun::new(s.clone(), 2, 3);
        second.attachment = Attachment::Second;
        if fingerprint(&run_symbolic(&second).map_err(e)?) != fp {
            return Err("attachment at c(p,2) differs".into());
        }
        let mut iso = SymbolicRun::new(s, 2, 3);
        iso.resolution = Resolution::Iso;
        if fingerprint(&run_symbolic(&iso).map_err(e)?) != fp {
            return Err("resolution as iso differs".into());
        }
    }
    Ok("truncation, attachment and resolution".into())
}
