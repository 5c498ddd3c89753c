use std::fmt::Write as _;
use std::sync::Arc;

use pgl2a::coeffsys::{
    run_concrete, run_symbolic, Battery, CoeffError, ConcreteRun, DecompositionReport, Resolution,
    SymbolicRun, Verdict,
};
use pgl2a::curve::{ClassificationSummary, WeierstrassCurve};
use pgl2a::domain::{build_domain_with, Attachment, DomainTree};
use pgl2a::field::{make_field, Element, FieldSpec};
use pgl2a::grouph::Ceilings;
use serde::Serialize;
use serde_json::json;

use crate::config::{AttachmentChoice, BatteryChoice, Format, Mode, ResolutionChoice, RunConfig};
use crate::{selftest, Failure};

/// The rendered artifact and whether it records a mismatch.
pub struct Outcome {
    pub body: String,
    pub mismatch: bool,
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, Failure> {
    match cfg.mode {
        Mode::Classify => classify(cfg),
        Mode::Domain => domain(cfg),
        Mode::Symbolic => symbolic(cfg),
        Mode::Concrete => concrete(cfg),
        Mode::Compare => compare(cfg),
        Mode::Selftest => {
            let checks = selftest::run_all(cfg.seed);
            let mismatch = checks.iter().any(|c| !c.ok);
            let body = match cfg.format {
                Format::Json => to_json(&json!({ "checks": checks })),
                Format::Text => selftest::render(&checks),
            };
            Ok(Outcome { body, mismatch })
        }
    }
}

fn field(cfg: &RunConfig) -> Result<Arc<FieldSpec>, Failure> {
    let (p, k) = cfg.field.expect("validated");
    make_field(p, k)
        .map(Arc::new)
        .map_err(|e| Failure::Input(e.to_string()))
}

fn parse_coefficient(f: &FieldSpec, s: &str) -> Result<Element, Failure> {
    let bad = || Failure::Input(format!("malformed coefficient {s:?}"));
    if s.contains(':') {
        let c = s
            .split(':')
            .map(|x| x.trim().parse::<i64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        f.from_coeffs(&c).map_err(|e| Failure::Input(format!("coefficient {s:?}: {e}")))
    } else {
        Ok(f.from_int(s.trim().parse::<i64>().map_err(|_| bad())?))
    }
}

pub fn parse_curve(f: Arc<FieldSpec>, spec: &str) -> Result<WeierstrassCurve, Failure> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 5 {
        return Err(Failure::Input(format!(
            "curve needs five coefficients a1,a2,a3,a4,a6, got {}",
            parts.len()
        )));
    }
    let mut coeffs = Vec::with_capacity(5);
    for s in parts {
        coeffs.push(parse_coefficient(&f, s)?);
    }
    let coeffs: [Element; 5] = coeffs.try_into().expect("five coefficients");
    WeierstrassCurve::new(f, coeffs).map_err(|e| Failure::Input(e.to_string()))
}

fn curve(cfg: &RunConfig) -> Result<WeierstrassCurve, Failure> {
    parse_curve(field(cfg)?, cfg.curve.as_deref().expect("validated"))
}

fn attachment(cfg: &RunConfig) -> Attachment {
    match cfg.attachment {
        AttachmentChoice::First => Attachment::First,
        AttachmentChoice::Second => Attachment::Second,
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn coeff_failure(e: CoeffError) -> Failure {
    match e {
        CoeffError::TooLarge { .. } => Failure::TooLarge(e.to_string()),
        CoeffError::Domain(_) => Failure::Input(e.to_string()),
        other => Failure::Internal(other.to_string()),
    }
}

fn classify(cfg: &RunConfig) -> Result<Outcome, Failure> {
    let s = curve(cfg)?.classify_all();
    let body = match cfg.format {
        Format::Json => to_json(&s),
        Format::Text => {
            let mut out = String::new();
            for lc in &s.lines {
                let _ = writeln!(out, "line {} case {}", lc.line, lc.case.number());
            }
            let _ = writeln!(
                out,
                "points {} two-torsion {} pairs {}",
                s.point_count(),
                s.two_torsion().len(),
                s.pairs().len()
            );
            out
        }
    };
    Ok(Outcome { body, mismatch: false })
}

fn tree(cfg: &RunConfig, summary: &ClassificationSummary) -> Result<DomainTree, Failure> {
    build_domain_with(summary, cfg.depth, attachment(cfg)).map_err(|e| Failure::Input(e.to_string()))
}

fn domain(cfg: &RunConfig) -> Result<Outcome, Failure> {
    let t = tree(cfg, &curve(cfg)?.classify_all())?;
    let body = match cfg.format {
        Format::Text => t.graph_dump(),
        Format::Json => {
            let vertices: Vec<String> = t.vertices().iter().map(|v| v.to_string()).collect();
            to_json(&json!({ "vertices": vertices, "edges": t.edges() }))
        }
    };
    Ok(Outcome { body, mismatch: false })
}

fn symbolic_run(cfg: &RunConfig) -> Result<SymbolicRun, Failure> {
    let mut run = match &cfg.summary {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
            let s: ClassificationSummary = serde_json::from_str(&text)
                .map_err(|e| Failure::Input(format!("bad summary {}: {e}", path.display())))?;
            SymbolicRun::new(s, cfg.depth, cfg.q_max)
        }
        None => SymbolicRun::for_curve(&curve(cfg)?, cfg.depth, cfg.q_max),
    };
    run.attachment = attachment(cfg);
    run.batteries = match cfg.battery {
        BatteryChoice::Primary => vec![Battery::Primary],
        BatteryChoice::Permuted => vec![Battery::Permuted],
        BatteryChoice::Both => Battery::ALL.to_vec(),
    };
    run.resolution = match cfg.resolution {
        ResolutionChoice::ZeroMap => Resolution::ZeroMap,
        ResolutionChoice::Iso => Resolution::Iso,
    };
    tree(cfg, &run.summary)?;
    Ok(run)
}

fn concrete_run(cfg: &RunConfig) -> Result<ConcreteRun, Failure> {
    let c = curve(cfg)?;
    let ceilings = if cfg.allow_large {
        Ceilings::unlimited()
    } else {
        Ceilings::default()
    };
    if cfg.q_max > ceilings.max_degree {
        return Err(Failure::TooLarge(format!(
            "degree {} exceeds the ceiling {}; pass --allow-large to lift it",
            cfg.q_max, ceilings.max_degree
        )));
    }
    tree(cfg, &c.classify_all())?;
    let mut run = ConcreteRun::new(c, cfg.depth, cfg.q_max);
    run.attachment = attachment(cfg);
    run.ceilings = ceilings;
    Ok(run)
}

fn report_body(cfg: &RunConfig, r: &DecompositionReport) -> String {
    match cfg.format {
        Format::Json => to_json(r),
        Format::Text => render_report(r),
    }
}

fn symbolic(cfg: &RunConfig) -> Result<Outcome, Failure> {
    let r = run_symbolic(&symbolic_run(cfg)?).map_err(coeff_failure)?;
    Ok(Outcome {
        body: report_body(cfg, &r),
        mismatch: r.has_mismatch(),
    })
}

fn concrete(cfg: &RunConfig) -> Result<Outcome, Failure> {
    let r = run_concrete(&concrete_run(cfg)?).map_err(coeff_failure)?;
    // Finite-field disagreement is an experimental outcome, not a failure.
    Ok(Outcome {
        body: report_body(cfg, &r),
        mismatch: false,
    })
}

fn compare(cfg: &RunConfig) -> Result<Outcome, Failure> {
    let s = run_symbolic(&symbolic_run(cfg)?).map_err(coeff_failure)?;
    let c = run_concrete(&concrete_run(cfg)?).map_err(coeff_failure)?;
    let diff: Vec<_> = c
        .degrees
        .iter()
        .map(|cd| {
            let symbolic: Vec<Verdict> = s.degrees.iter().filter(|d| d.i == cd.i).map(|d| d.verdict).collect();
            json!({
                "i": cd.i,
                "symbolic_verdicts": symbolic,
                "concrete_verdict": cd.verdict,
                "concrete_assembled": cd.assembled,
                "concrete_rhs": cd.rhs_group,
                "agree": symbolic.iter().all(|v| *v == cd.verdict),
            })
        })
        .collect();
    let body = match cfg.format {
        Format::Json => to_json(&json!({ "symbolic": s, "concrete": c, "diff": diff })),
        Format::Text => format!("{}\n{}", render_report(&s), render_report(&c)),
    };
    Ok(Outcome {
        body,
        mismatch: s.has_mismatch(),
    })
}

pub fn render_report(r: &DecompositionReport) -> String {
    let mut out = String::new();
    let mode = serde_json::to_value(r.mode).expect("mode");
    let _ = writeln!(
        out,
        "{} report, depth {}, e(p) at c(p,{})",
        mode.as_str().unwrap_or("?"),
        r.depth,
        r.attachment.depth()
    );
    let _ = writeln!(out, "H_0 = {}, E2(1,0) = {}", r.degree_zero.h0, r.degree_zero.h1);
    for d in &r.degrees {
        let battery = d.battery.map(|b| format!(" [{}]", b.name())).unwrap_or_default();
        let verdict = serde_json::to_value(d.verdict).expect("verdict");
        let _ = writeln!(
            out,
            "H_{}{}: {} (E2 columns {} | {}), expected {}: {}",
            d.i,
            battery,
            d.assembled,
            d.e2.column0,
            d.e2.column1,
            d.rhs_group,
            verdict.as_str().unwrap_or("?")
        );
    }
    if let Some(m) = &r.measurements {
        for f in &m.nessus {
            let _ = writeln!(
                out,
                "q={} torus {} -> c(p,{}) {}: {}",
                f.q,
                f.torus,
                f.depth,
                f.triangular,
                if f.iso { "iso" } else { "not iso" }
            );
        }
        for mm in &m.maps {
            let _ = writeln!(
                out,
                "q={} {} {} -> {}: zero {}, iso {}",
                mm.q, mm.name, mm.source, mm.target, mm.zero, mm.iso
            );
        }
    }
    out
}
