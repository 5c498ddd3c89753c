//! Assembly of `H_n(PGL2(A))` from the two-column page, the closed-form
//! right-hand side, and the comparison report.

use serde::{Deserialize, Serialize};

use super::concrete::{ConcreteCatalog, MapMeasurement, NessusFlag};
use super::{
    concrete_e1_page, concrete_system, degree_zero_system, e1_page, page_homology, symbolic_system,
    Battery, CoeffError, Instantiation, PageHomology, Resolution, SymbolicSystem, Token,
};
use crate::abgrp::FgAbGroup;
use crate::curve::{ClassificationSummary, CurveDescriptor, LineCase, WeierstrassCurve};
use crate::domain::{build_domain_with, Attachment, DomainTree};
use crate::exec;
use crate::field::FieldDescriptor;
use crate::grouph::Ceilings;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Symbolic,
    Concrete,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Match,
    Mismatch,
    CaveatExtension,
}

/// One factor of the right-hand side with the point or line it comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhsEntry {
    pub token: String,
    pub label: String,
}

/// One HqPGL2k per 2-torsion point, one HqUnits per pair `{p, -p}` and one
/// quadratic token per line without rational points.
pub fn theorem_rhs(summary: &ClassificationSummary) -> Vec<(Token, String)> {
    let mut out: Vec<(Token, String)> = summary
        .two_torsion()
        .into_iter()
        .map(|p| (Token::HqPGL2k, p.to_string()))
        .collect();
    out.extend(
        summary
            .pairs()
            .into_iter()
            .map(|(p, q)| (Token::HqUnits, format!("{{{p},{q}}}"))),
    );
    out.extend(
        summary
            .case1_lines()
            .into_iter()
            .map(|l| (Token::HqQuadUnitsModUnits(l.clone()), format!("l={l}"))),
    );
    out
}

/// `E2_{0,n}`, `E2_{1,n-1}` and their direct sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assembled {
    pub group: FgAbGroup,
    pub column0: FgAbGroup,
    pub column1: FgAbGroup,
}

/// Degree `n` entries for `n = 0..pages.len()`, from `pages[q]` in degree `q`.
pub fn assemble(pages: &[PageHomology]) -> Vec<Assembled> {
    (0..pages.len())
        .map(|n| {
            let column0 = pages[n].h0.clone();
            let column1 = if n == 0 {
                FgAbGroup::trivial()
            } else {
                pages[n - 1].h1.clone()
            };
            Assembled {
                group: column0.direct_sum(&column1),
                column0,
                column1,
            }
        })
        .collect()
}

/// The instantiated right-hand side and the verdict. With `caveat`, a
/// nonzero `E2_{1,n-1}` yields `CaveatExtension` instead of a verdict.
pub fn compare(
    assembled: &Assembled,
    rhs: &[(Token, String)],
    resolve: impl Fn(&Token) -> FgAbGroup,
    caveat: bool,
) -> (FgAbGroup, Verdict) {
    let groups: Vec<FgAbGroup> = rhs.iter().map(|(t, _)| resolve(t)).collect();
    let rhs_group = FgAbGroup::sum_all(&groups);
    let verdict = if caveat && !assembled.column1.is_trivial() {
        Verdict::CaveatExtension
    } else if assembled.group.iso_eq(&rhs_group) {
        Verdict::Match
    } else {
        Verdict::Mismatch
    };
    (rhs_group, verdict)
}

/// The two page columns contributing to one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct E2 {
    pub column0: FgAbGroup,
    pub column1: FgAbGroup,
}

impl From<Assembled> for E2 {
    fn from(a: Assembled) -> Self {
        E2 {
            column0: a.column0,
            column1: a.column1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubtreeDiagnostic {
    pub line: String,
    pub case: u8,
    pub h0: FgAbGroup,
    pub h1: FgAbGroup,
    pub expected: FgAbGroup,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeEntry {
    pub i: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub battery: Option<Battery>,
    pub assembled: FgAbGroup,
    pub e2: E2,
    pub rhs: Vec<RhsEntry>,
    pub rhs_group: FgAbGroup,
    pub verdict: Verdict,
    pub subtrees: Vec<SubtreeDiagnostic>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeZero {
    pub h0: FgAbGroup,
    pub h1: FgAbGroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Measurements {
    pub nessus: Vec<NessusFlag>,
    pub maps: Vec<MapMeasurement>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub mode: Mode,
    pub curve: Option<CurveDescriptor>,
    pub field: Option<FieldDescriptor>,
    pub depth: usize,
    pub attachment: Attachment,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub resolution: Option<Resolution>,
    pub degree_zero: DegreeZero,
    pub degrees: Vec<DegreeEntry>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub measurements: Option<Measurements>,
}

impl DecompositionReport {
    pub fn has_mismatch(&self) -> bool {
        self.degrees.iter().any(|d| d.verdict == Verdict::Mismatch)
    }

    pub fn all_match(&self) -> bool {
        self.degrees.iter().all(|d| d.verdict == Verdict::Match)
    }
}

fn expected_token(case: &LineCase, line: &crate::curve::Line) -> Token {
    match case {
        LineCase::Case1 => Token::HqQuadUnitsModUnits(line.clone()),
        LineCase::Case2 { .. } => Token::HqPGL2k,
        LineCase::Case3 { .. } => Token::HqUnits,
    }
}

fn diagnostic(
    subtree: &DomainTree,
    page: PageHomology,
    resolve: &impl Fn(&Token) -> FgAbGroup,
) -> SubtreeDiagnostic {
    let lc = &subtree.lines()[0];
    let expected = resolve(&expected_token(&lc.case, &lc.line));
    SubtreeDiagnostic {
        line: lc.line.to_string(),
        case: lc.case.number(),
        ok: page.h0 == expected && page.h1.is_trivial(),
        h0: page.h0,
        h1: page.h1,
        expected,
    }
}

/// Symbolic evaluation of a summary.
#[derive(Clone, Debug)]
pub struct SymbolicRun {
    pub summary: ClassificationSummary,
    pub depth: usize,
    pub attachment: Attachment,
    pub q_max: usize,
    pub batteries: Vec<Battery>,
    pub resolution: Resolution,
    pub curve: Option<CurveDescriptor>,
    pub field: Option<FieldDescriptor>,
}

impl SymbolicRun {
    pub fn new(summary: ClassificationSummary, depth: usize, q_max: usize) -> Self {
        SymbolicRun {
            summary,
            depth,
            attachment: Attachment::First,
            q_max,
            batteries: Battery::ALL.to_vec(),
            resolution: Resolution::ZeroMap,
            curve: None,
            field: None,
        }
    }

    pub fn for_curve(curve: &WeierstrassCurve, depth: usize, q_max: usize) -> Self {
        SymbolicRun {
            curve: Some(curve.descriptor()),
            field: Some(curve.field().descriptor()),
            ..SymbolicRun::new(curve.classify_all(), depth, q_max)
        }
    }
}

pub fn run_symbolic(run: &SymbolicRun) -> Result<DecompositionReport, CoeffError> {
    run_symbolic_with(run, |_, _| {})
}

/// As [`run_symbolic`], with `tweak(q, system)` applied to every degree
/// `q >= 1` system before its page is built.
pub fn run_symbolic_with(
    run: &SymbolicRun,
    tweak: impl Fn(usize, &mut SymbolicSystem) + Sync,
) -> Result<DecompositionReport, CoeffError> {
    let tree = build_domain_with(&run.summary, run.depth, run.attachment)?;
    let zero_inst = Instantiation::battery(Battery::Primary, run.resolution);
    let zero_page = page_homology(&e1_page(&degree_zero_system(&tree), &zero_inst));
    let rhs = theorem_rhs(&run.summary);
    let subtrees: Vec<DomainTree> = tree
        .lines()
        .iter()
        .map(|lc| tree.subtree(&lc.line))
        .collect::<Result<_, _>>()?;
    let mut systems = Vec::with_capacity(run.q_max);
    for q in 1..=run.q_max {
        let mut sys = symbolic_system(&tree, q)?;
        tweak(q, &mut sys);
        systems.push(sys);
    }

    let mut degrees = Vec::new();
    for &battery in &run.batteries {
        let inst = Instantiation::battery(battery, run.resolution);
        let resolve = |t: &Token| inst.group(t);
        let mut pages = vec![zero_page.clone()];
        pages.extend(exec::map(&systems, |sys| page_homology(&e1_page(sys, &inst))));
        let jobs: Vec<(usize, usize)> = (1..=run.q_max)
            .flat_map(|q| (0..subtrees.len()).map(move |l| (q, l)))
            .collect();
        let diags = exec::map(&jobs, |&(q, l)| {
            let sys = symbolic_system(&subtrees[l], q).expect("q >= 1");
            diagnostic(&subtrees[l], page_homology(&e1_page(&sys, &inst)), &resolve)
        });
        for (n, a) in assemble(&pages).into_iter().enumerate().skip(1) {
            let (rhs_group, verdict) = compare(&a, &rhs, resolve, false);
            degrees.push(DegreeEntry {
                i: n,
                battery: Some(battery),
                assembled: a.group.clone(),
                e2: a.into(),
                rhs: rhs_entries(&rhs),
                rhs_group,
                verdict,
                subtrees: diags[(n - 1) * subtrees.len()..n * subtrees.len()].to_vec(),
            });
        }
    }
    Ok(DecompositionReport {
        mode: Mode::Symbolic,
        curve: run.curve.clone(),
        field: run.field.clone(),
        depth: run.depth,
        attachment: run.attachment,
        resolution: Some(run.resolution),
        degree_zero: DegreeZero {
            h0: zero_page.h0,
            h1: zero_page.h1,
        },
        degrees,
        measurements: None,
    })
}

fn rhs_entries(rhs: &[(Token, String)]) -> Vec<RhsEntry> {
    rhs.iter()
        .map(|(t, l)| RhsEntry {
            token: t.name().to_string(),
            label: l.clone(),
        })
        .collect()
}

/// Concrete evaluation over the curve's own field.
#[derive(Clone, Debug)]
pub struct ConcreteRun {
    pub curve: WeierstrassCurve,
    pub depth: usize,
    pub attachment: Attachment,
    pub q_max: usize,
    pub ceilings: Ceilings,
}

impl ConcreteRun {
    pub fn new(curve: WeierstrassCurve, depth: usize, q_max: usize) -> Self {
        ConcreteRun {
            curve,
            depth,
            attachment: Attachment::First,
            q_max,
            ceilings: Ceilings::default(),
        }
    }
}

pub fn run_concrete(run: &ConcreteRun) -> Result<DecompositionReport, CoeffError> {
    let summary = run.curve.classify_all();
    let tree = build_domain_with(&summary, run.depth, run.attachment)?;
    let field = run.curve.field();
    let catalog = ConcreteCatalog::new(field, &tree, run.ceilings)?;
    let subtrees: Vec<DomainTree> = tree
        .lines()
        .iter()
        .map(|lc| tree.subtree(&lc.line))
        .collect::<Result<_, _>>()?;
    let qs: Vec<usize> = (0..=run.q_max).collect();
    let levels = exec::map(&qs, |&q| catalog.level(q))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let pages: Vec<PageHomology> = exec::map(&levels, |lvl| {
        page_homology(&concrete_e1_page(&concrete_system(lvl, &tree)))
    });
    let rhs = theorem_rhs(&summary);
    let mut degrees = Vec::new();
    let mut nessus = Vec::new();
    let mut maps = Vec::new();
    for (n, a) in assemble(&pages).into_iter().enumerate().skip(1) {
        let lvl = &levels[n];
        let resolve = |t: &Token| {
            match t {
                Token::HqPGL2k => lvl.pgl2(),
                Token::HqUnits => lvl.units(),
                Token::HqQuadUnitsModUnits(_) => lvl.quad(),
                Token::HqAdditive | Token::Zero => Some(FgAbGroup::trivial()),
                Token::Z0 => Some(FgAbGroup::free(1)),
            }
            .expect("stabilizer present for every token of the tree")
        };
        let (rhs_group, verdict) = compare(&a, &rhs, resolve, true);
        let subtrees = subtrees
            .iter()
            .map(|sub| {
                let page = page_homology(&concrete_e1_page(&concrete_system(lvl, sub)));
                diagnostic(sub, page, &resolve)
            })
            .collect();
        degrees.push(DegreeEntry {
            i: n,
            battery: None,
            assembled: a.group.clone(),
            e2: a.into(),
            rhs: rhs_entries(&rhs),
            rhs_group,
            verdict,
            subtrees,
        });
        nessus.extend(lvl.nessus_flags());
        maps.extend(lvl.measurements());
    }
    Ok(DecompositionReport {
        mode: Mode::Concrete,
        curve: Some(run.curve.descriptor()),
        field: Some(field.descriptor()),
        depth: run.depth,
        attachment: run.attachment,
        resolution: None,
        degree_zero: DegreeZero {
            h0: pages[0].h0.clone(),
            h1: pages[0].h1.clone(),
        },
        degrees,
        measurements: Some(Measurements { nessus, maps }),
    })
}
