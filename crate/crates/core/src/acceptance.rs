//! The acceptance criteria as runnable checks, shared by the test suite and
//! `g2cover --verify-all`.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::amalgam::{certify_universal, glued_counterexample, reconstruct_check, sketch, FiniteGroup};
use crate::covers::{flag_complex, join_divisibility, sheets, universal_cover, Divisibility, DEFAULT_COSET_CAP};
use crate::error::Result;
use crate::fpgroup::{todd_coxeter, GroupOrder, Presentation};
use crate::incidence::TypeDiagram;
use crate::permgroup::{flag_orbits, line_point_suborbits, preserves_geometry, ShadowAction};
use crate::workbench::Workbench;

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub gating: bool,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
    pub limit_ms: Option<u128>,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let status = match (self.passed, self.gating) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "MISS",
        };
        let gate = if self.gating { "" } else { " (non-gating)" };
        format!("criterion {:>2} {status}{gate} [{} ms] {}: {}", self.id, self.elapsed_ms, self.title, self.detail)
    }
}

pub const CRITERIA: [(u8, &str, bool, Option<u64>); 11] = [
    (1, "hexagon construction", true, Some(5)),
    (2, "census at q=2", true, Some(30)),
    (3, "simple connectivity of Γ0, Γ2, Γ3", true, Some(900)),
    (4, "three-fold universal cover of Γ1", true, Some(300)),
    (5, "join divisibility", true, None),
    (6, "Sp6(2) and the hexagon stabiliser", true, Some(120)),
    (7, "orbit claims", true, None),
    (8, "reconstruction from the sketch", true, Some(300)),
    (9, "fused amalgam certificate", true, None),
    (10, "coset enumeration suite", true, Some(10)),
    (11, "q=4 censuses and simple connectivity", false, None),
];

fn outcome(ok: bool, detail: String) -> Result<(bool, String)> {
    Ok((ok, detail))
}

fn c1() -> Result<(bool, String)> {
    let wb = Workbench::new(2)?;
    let gh = wb.model.verify_generalized_hexagon();
    let (p, l) = (wb.model.points().len(), wb.model.hexagon_lines().len());
    outcome(
        p == 63 && l == 63 && gh.girth == Some(12) && gh.diameter == Some(6),
        format!("{p} points, {l} lines, girth {:?}, diameter {:?}", gh.girth, gh.diameter),
    )
}

fn c2() -> Result<(bool, String)> {
    let c = Workbench::new(2)?.census();
    let (l, p) = (&c.line_counts, &c.plane_counts);
    let lines = [l.hexagon, l.ideal, l.non_symplectic, l.total];
    let planes = [p.ideal, p.hexagonal_singular, p.nonsingular_special, p.nonsingular_nonspecial, p.total];
    outcome(
        lines == [63, 252, 336, 651]
            && planes == [72, 63, 756, 504, 1395]
            && lines[..3].iter().sum::<usize>() == l.total
            && planes[..4].iter().sum::<usize>() == p.total,
        format!("lines {lines:?}, planes {planes:?}"),
    )
}

fn c3() -> Result<(bool, String)> {
    let wb = Workbench::new(2)?;
    let mut ok = true;
    let mut parts = Vec::new();
    for v in [0u8, 2, 3] {
        let r = sheets(&flag_complex(&wb.gamma(v)?.geometry)?, DEFAULT_COSET_CAP)?;
        ok &= r.pi1_order == Some(1);
        parts.push(format!("sheets(Γ{v}) = {:?}", r.pi1_order));
    }
    outcome(ok, parts.join(", "))
}

fn c4() -> Result<(bool, String)> {
    let wb = Workbench::new(2)?;
    let base = flag_complex(&wb.gamma(1)?.geometry)?;
    let r = sheets(&base, DEFAULT_COSET_CAP)?;
    let cover = universal_cover(&base, DEFAULT_COSET_CAP)?;
    let (conn, local, simply) = match &cover {
        Some(c) => (
            c.complex.is_connected(),
            c.is_local_isomorphism(&base),
            sheets(&c.complex, DEFAULT_COSET_CAP)?.pi1_order == Some(1),
        ),
        None => (false, false, false),
    };
    let n = cover.as_ref().map_or(0, |c| c.complex.vertices);
    outcome(
        r.pi1_order == Some(3) && cover.as_ref().map(|c| c.sheets) == Some(3) && conn && local && simply,
        format!("sheets(Γ1) = {:?}; cover on {n} vertices: connected {conn}, local isomorphism {local}, simply connected {simply}", r.pi1_order),
    )
}

fn c5() -> Result<(bool, String)> {
    let wb = Workbench::new(2)?;
    let g: Vec<_> = (0u8..3).map(|v| wb.gamma(v)).collect::<Result<_>>()?;
    let t: Vec<_> = g
        .iter()
        .map(|x| flag_complex(&x.geometry).and_then(|c| sheets(&c, DEFAULT_COSET_CAP)))
        .collect::<Result<_>>()?;
    let d = join_divisibility(&t[0], &t[1], &t[2]);
    let joined = g[1].geometry.join(&g[2].geometry)?;
    let same = joined == g[0].geometry;
    outcome(
        d == Divisibility::True && same && t[1].pi1_order == Some(3),
        format!(
            "t = ({:?}, {:?}, {:?}), divisibility {d:?}, join(Γ1, Γ2) == Γ0: {same}",
            t[0].pi1_order, t[1].pi1_order, t[2].pi1_order
        ),
    )
}

fn c6() -> Result<(bool, String)> {
    let groups = Workbench::new(2)?.groups()?;
    let (sp, g2, orbit) = (groups.sp.order(), groups.g2.order(), groups.orbit_length);
    outcome(
        sp == 1_451_520 && orbit == 120 && g2 == 12096,
        format!("|Sp6(2)| = {sp}, orbit length {orbit}, stabiliser order {g2}"),
    )
}

fn c7() -> Result<(bool, String)> {
    let wb = Workbench::new(2)?;
    let groups = wb.groups()?;
    let g1 = wb.gamma(1)?;
    let (a1, _) = groups.action_on(&g1.geometry)?;
    let ch1 = flag_orbits(&a1, &g1.geometry, &[1, 2, 3]).orbit_count;
    let g2 = wb.gamma(2)?;
    let (a2, _) = groups.action_on(&g2.geometry)?;
    let geo = &g2.geometry;
    let counts: Vec<usize> = [[1u8, 2], [2, 3], [1, 3]].iter().map(|t| flag_orbits(&a2, geo, t).orbit_count).collect();
    let l = geo.elements_of_type(2)[0];
    let pi = *geo.neighbors(l).iter().find(|&&x| geo.type_of(x) == 3).expect("every line lies in a plane");
    let mut sizes: Vec<usize> = line_point_suborbits(&a2, geo, l, pi)?.iter().map(Vec::len).collect();
    sizes.sort_unstable();
    outcome(
        ch1 == 1 && counts == [1, 1, 2] && sizes == [1, 2],
        format!("Γ1 chamber orbits {ch1}; Γ2 flag orbits (12, 23, 13) = {counts:?}; (l, π) suborbits on l {sizes:?}"),
    )
}

fn c8() -> Result<(bool, String)> {
    let wb = Workbench::new(2)?;
    let groups = wb.groups()?;
    let gamma = wb.gamma(2)?;
    let geo = &gamma.geometry;
    let (action, shadow) = groups.action_on(geo)?;
    let g = &groups.elements;
    let w = geo.chambers()[0].clone();
    let sk = sketch(geo, &action, g, &w, &TypeDiagram::string(&[1, 2, 3]))?;
    let rep = reconstruct_check(geo, &sk, g, |x, e| shadow.act(g.element(x), e));

    let ex = glued_counterexample()?;
    let sh = ShadowAction::new(&ex.geometry, ex.base)?;
    let act = sh.extend_group(&ex.base_group)?;
    let fg = FiniteGroup::from_group(&ex.base_group)?;
    let d4 = TypeDiagram::string(&[0, 1, 2, 3]);
    let wg = ex.geometry.chambers()[0].clone();
    let glued_fails = preserves_geometry(&act, &ex.geometry)
        && !ex.geometry.direct_sum_check(&d4)
        && !reconstruct_check(&ex.geometry, &sketch(&ex.geometry, &act, &fg, &wg, &d4)?, &fg, |x, e| {
            sh.act(fg.element(x), e)
        })
        .passed;
    outcome(
        rep.passed && glued_fails,
        format!(
            "Γ2 sketch: {} elements, {} incident pairs, preserved {} reflected {}; glued geometry rejected: {glued_fails}",
            sk.geometry.len(),
            rep.sketch_pairs,
            rep.incidence_preserved,
            rep.incidence_reflected
        ),
    )
}

fn c9() -> Result<(bool, String)> {
    let wb = Workbench::new(2)?;
    let groups = wb.groups()?;
    let c2 = certify_universal("Γ2", &wb.gamma(2)?.geometry, &groups, DEFAULT_COSET_CAP);
    let c1 = certify_universal("Γ1", &wb.gamma(1)?.geometry, &groups, DEFAULT_COSET_CAP);
    let failed2: Vec<&str> = c2.hypotheses.iter().filter(|h| !h.passed).map(|h| h.name.as_str()).collect();
    let t1 = c1.hypothesis("simply_connected").map(|h| h.evidence["pi1_order"].clone());
    let discrepancy =
        c1.conclusion.is_none() && t1 == Some(serde_json::json!(3)) && c1.notes.iter().any(|n| n.contains("index 3"));
    outcome(
        c2.conclusion.as_deref() == Some("U(A) ≅ G2(2)") && discrepancy,
        format!(
            "Γ2: {} hypotheses, failed {failed2:?}, conclusion {:?}; Γ1: conclusion {:?}, pi1_order {}",
            c2.hypotheses.len(),
            c2.conclusion,
            c1.conclusion,
            t1.unwrap_or_default()
        ),
    )
}

fn c10() -> Result<(bool, String)> {
    let order = |text: &str| Presentation::parse(text).map(|p| todd_coxeter(&p, 100));
    let listed =
        [order("gen a\nrel a a a\n")?, order("gen a\ngen b\nrel a a\nrel b b\nrel a b a b a b\n")?, order("gen a\n")?];
    let trivial = todd_coxeter(&Presentation::anonymous(0, vec![])?, 100);
    let listed_ok = listed == [GroupOrder::Finite(3), GroupOrder::Finite(6), GroupOrder::Indeterminate]
        && trivial == GroupOrder::Finite(1);
    let mut cyclic_ok = true;
    for n in 1..=50u64 {
        cyclic_ok &=
            todd_coxeter(&Presentation::anonymous(1, vec![vec![1; n as usize]])?, 1000) == GroupOrder::Finite(n);
    }
    let rels = vec![vec![1, 1, 1], vec![2, 2], vec![1, 2, 1, 2]];
    let mut rev = rels.clone();
    rev.reverse();
    let perm_ok =
        todd_coxeter(&Presentation::anonymous(2, rels)?, 1000) == todd_coxeter(&Presentation::anonymous(2, rev)?, 1000);
    outcome(
        listed_ok && cyclic_ok && perm_ok,
        format!("listed {listed:?}, trivial {trivial:?}, Z/n for n ≤ 50 {cyclic_ok}, relator permutation {perm_ok}"),
    )
}

/// Censuses at q = 4 against closed formulas, and simple connectivity of
/// Γ2 and Γ3. Too-small caps are reported, not treated as failures.
fn c11() -> Result<(bool, String)> {
    let q: u64 = 4;
    let wb = Workbench::new(q as u32)?;
    let c = wb.census();
    let gauss = |k: u32| -> u64 {
        let num: u64 = (0..k).map(|i| q.pow(6 - i) - 1).product();
        let den: u64 = (0..k).map(|i| q.pow(i + 1) - 1).product();
        num / den
    };
    let points = (q.pow(6) - 1) / (q - 1);
    let iso_lines = (q.pow(6) - 1) * (q.pow(4) - 1) / ((q - 1) * (q * q - 1));
    let iso_planes = (q + 1) * (q * q + 1) * (q.pow(3) + 1);
    let (l, p) = (&c.line_counts, &c.plane_counts);
    let census_ok = c.gh_check.passed
        && l.total as u64 == gauss(2)
        && p.total as u64 == gauss(3)
        && l.hexagon as u64 == points
        && (l.hexagon + l.ideal) as u64 == iso_lines
        && p.hexagonal_singular as u64 == points
        && (p.ideal + p.hexagonal_singular) as u64 == iso_planes;
    let mut parts = vec![format!("census {census_ok}")];
    let mut sheets_ok = true;
    for v in [2u8, 3] {
        let r = sheets(&flag_complex(&wb.gamma(v)?.geometry)?, DEFAULT_COSET_CAP)?;
        sheets_ok &= r.pi1_order == Some(1);
        parts.push(format!("sheets(Γ{v}, 4) = {}", r.pi1_order.map_or("Indeterminate".into(), |t| t.to_string())));
    }
    outcome(census_ok && sheets_ok, parts.join(", "))
}

pub fn run(id: u8) -> CriterionResult {
    let &(_, title, gating, limit) = CRITERIA.iter().find(|c| c.0 == id).expect("criterion id in 1..=11");
    let start = Instant::now();
    let result = match id {
        1 => c1(),
        2 => c2(),
        3 => c3(),
        4 => c4(),
        5 => c5(),
        6 => c6(),
        7 => c7(),
        8 => c8(),
        9 => c9(),
        10 => c10(),
        _ => c11(),
    };
    let elapsed = start.elapsed();
    let limit = limit.map(Duration::from_secs);
    let (mut passed, mut detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
    if let Some(lim) = limit {
        if elapsed > lim {
            passed = false;
            detail.push_str(&format!(" (over the {} s limit)", lim.as_secs()));
        }
    }
    CriterionResult {
        id,
        title,
        gating,
        passed,
        detail,
        elapsed_ms: elapsed.as_millis(),
        limit_ms: limit.map(|d| d.as_millis()),
    }
}

pub fn run_all(include_stretch: bool) -> Vec<CriterionResult> {
    CRITERIA.iter().filter(|c| c.2 || include_stretch).map(|c| run(c.0)).collect()
}
