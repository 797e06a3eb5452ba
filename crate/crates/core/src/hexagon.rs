//! The split Cayley hexagon `H(q)` and the classification of lines and planes
//! of `PG(5,q)` that it induces.
//!
//! The hexagon is built in `Q(6,q)` by filtering quadric lines through the six
//! linear conditions on their Grassmann coordinates, then projected from the
//! nucleus into `W(5,q)`. All later structure (ideal lines, ideal centres,
//! poles, reguli) lives in `PG(5,q)`.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finfield::FiniteField;
use crate::projspace::{
    self, enumerate_points, enumerate_subspaces, grassmann_from_pair, on_quadric, point_index, polar_form,
    project_from_nucleus, ProjPoint, Subspace, SymplecticSpace,
};

pub const NO_LINE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum LineClass {
    Hexagon,
    Ideal,
    NonSymplectic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PlaneClass {
    IdealPlane,
    HexagonalSingular,
    NonsingularSpecial,
    NonsingularNonspecial,
}

impl PlaneClass {
    pub fn is_nonsingular(self) -> bool {
        matches!(self, PlaneClass::NonsingularSpecial | PlaneClass::NonsingularNonspecial)
    }
}

/// Points and lines of `PG(5,q)` with the hexagon lines marked.
#[derive(Debug, Clone)]
pub struct HexagonModel {
    field: FiniteField,
    space: SymplecticSpace,
    points: Vec<ProjPoint>,
    lines: Vec<Subspace>,
    line_points: Vec<Vec<u32>>,
    /// `line_through[a * n + b]` is the line joining points `a != b`.
    line_through: Vec<u32>,
    line_index: HashMap<Subspace, u32>,
    hexagon_lines: Vec<u32>,
    is_hexagon: Vec<bool>,
    /// Hexagon lines through each point.
    pencils: Vec<Vec<u32>>,
}

/// The six Grassmann conditions selecting hexagon lines among the lines of
/// `Q(6,q)`. Signs vanish in characteristic two.
const HEXAGON_CONDITIONS: [((usize, usize), (usize, usize)); 6] =
    [((1, 2), (3, 4)), ((5, 6), (0, 3)), ((4, 5), (2, 3)), ((0, 1), (3, 6)), ((0, 2), (3, 5)), ((4, 6), (1, 3))];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GhCheck {
    pub girth: Option<usize>,
    pub diameter: Option<usize>,
    pub passed: bool,
}

/// Girth and diameter of the incidence graph of a point-line structure;
/// a generalized hexagon has girth 12 and diameter 6.
pub fn verify_generalized_hexagon_lines(n_points: usize, lines: &[Vec<u32>]) -> GhCheck {
    let n = n_points + lines.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (li, pts) in lines.iter().enumerate() {
        for &p in pts {
            adj[p as usize].push(n_points + li);
            adj[n_points + li].push(p as usize);
        }
    }
    let mut girth: Option<usize> = None;
    let mut diameter = Some(0usize);
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    for root in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    reached += 1;
                    queue.push_back(v);
                } else if parent[u] != v {
                    let cycle = dist[u] + dist[v] + 1;
                    girth = Some(girth.map_or(cycle, |g| g.min(cycle)));
                }
            }
        }
        if reached < n {
            diameter = None;
        } else if let Some(d) = diameter {
            diameter = Some(d.max(dist.iter().copied().max().unwrap_or(0)));
        }
    }
    GhCheck { girth, diameter, passed: girth == Some(12) && diameter == Some(6) }
}

impl HexagonModel {
    pub fn build(field: &FiniteField) -> Result<Self> {
        Self::build_with_budget(field, projspace::DEFAULT_ENUMERATION_BUDGET)
    }

    pub fn build_with_budget(field: &FiniteField, budget: u64) -> Result<Self> {
        let q = field.order();
        let points = enumerate_points(5, field, budget)?;
        let lines = enumerate_subspaces(1, 5, field, budget)?;
        let n = points.len();
        let mut line_points = Vec::with_capacity(lines.len());
        let mut line_through = vec![NO_LINE; n * n];
        let mut line_index = HashMap::with_capacity(lines.len());
        for (li, l) in lines.iter().enumerate() {
            let pts: Vec<u32> = l.points(field).iter().map(|p| point_index(q, p.coords()) as u32).collect();
            for &a in &pts {
                for &b in &pts {
                    if a != b {
                        line_through[a as usize * n + b as usize] = li as u32;
                    }
                }
            }
            line_points.push(pts);
            line_index.insert(l.clone(), li as u32);
        }

        // hexagon lines: pairs of collinear quadric points in PG(6,q)
        let quadric: Vec<ProjPoint> =
            enumerate_points(6, field, budget)?.into_iter().filter(|p| on_quadric(field, p)).collect();
        let projected: Vec<u32> = quadric
            .iter()
            .map(|x| project_from_nucleus(field, x).map(|y| point_index(q, y.coords()) as u32))
            .collect::<Result<_>>()?;
        let mut hex = BTreeSet::new();
        for (i, a) in quadric.iter().enumerate() {
            for (j, b) in quadric.iter().enumerate().skip(i + 1) {
                if !polar_form(field, a.coords(), b.coords())?.is_zero() {
                    continue;
                }
                let g = grassmann_from_pair(field, a.coords(), b.coords())?;
                if HEXAGON_CONDITIONS.iter().all(|&((a1, b1), (a2, b2))| g.get(a1, b1) == g.get(a2, b2)) {
                    let li = line_through[projected[i] as usize * n + projected[j] as usize];
                    hex.insert(li);
                }
            }
        }
        let hexagon_lines: Vec<u32> = hex.into_iter().collect();
        let mut is_hexagon = vec![false; lines.len()];
        let mut pencils = vec![Vec::new(); n];
        for &li in &hexagon_lines {
            is_hexagon[li as usize] = true;
            for &p in &line_points[li as usize] {
                pencils[p as usize].push(li);
            }
        }
        Ok(HexagonModel {
            field: field.clone(),
            space: SymplecticSpace::new(field),
            points,
            lines,
            line_points,
            line_through,
            line_index,
            hexagon_lines,
            is_hexagon,
            pencils,
        })
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn q(&self) -> usize {
        self.field.order()
    }

    pub fn symplectic(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn lines(&self) -> &[Subspace] {
        &self.lines
    }

    pub fn line_points(&self, line: u32) -> &[u32] {
        &self.line_points[line as usize]
    }

    pub fn line_through(&self, a: u32, b: u32) -> u32 {
        self.line_through[a as usize * self.points.len() + b as usize]
    }

    pub fn line_id(&self, l: &Subspace) -> Option<u32> {
        self.line_index.get(l).copied()
    }

    pub fn point_id(&self, p: &ProjPoint) -> u32 {
        point_index(self.q(), p.coords()) as u32
    }

    pub fn hexagon_lines(&self) -> &[u32] {
        &self.hexagon_lines
    }

    pub fn is_hexagon_line(&self, line: u32) -> bool {
        self.is_hexagon[line as usize]
    }

    pub fn hexagon_pencil(&self, point: u32) -> &[u32] {
        &self.pencils[point as usize]
    }

    pub fn verify_generalized_hexagon(&self) -> GhCheck {
        let lines: Vec<Vec<u32>> = self.hexagon_lines.iter().map(|&l| self.line_points[l as usize].clone()).collect();
        verify_generalized_hexagon_lines(self.points.len(), &lines)
    }

    /// Distance in the hexagon's incidence graph from every point to every
    /// hexagon line, indexed `[point][position in hexagon_lines()]`.
    pub fn point_line_distances(&self) -> Vec<Vec<u8>> {
        let n = self.points.len();
        let hex_pos: HashMap<u32, usize> = self.hexagon_lines.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let mut out = Vec::with_capacity(n);
        for root in 0..n {
            let mut pdist = vec![u8::MAX; n];
            let mut ldist = vec![u8::MAX; self.hexagon_lines.len()];
            pdist[root] = 0;
            let mut queue = VecDeque::from([root as u32]);
            while let Some(p) = queue.pop_front() {
                for &l in &self.pencils[p as usize] {
                    let li = hex_pos[&l];
                    if ldist[li] == u8::MAX {
                        ldist[li] = pdist[p as usize] + 1;
                        for &r in &self.line_points[l as usize] {
                            if pdist[r as usize] == u8::MAX {
                                pdist[r as usize] = ldist[li] + 1;
                                queue.push_back(r);
                            }
                        }
                    }
                }
            }
            out.push(ldist);
        }
        out
    }

    pub fn classify_line_id(&self, line: u32) -> LineClass {
        if self.is_hexagon[line as usize] {
            LineClass::Hexagon
        } else if self.space.is_totally_isotropic(&self.lines[line as usize]) {
            LineClass::Ideal
        } else {
            LineClass::NonSymplectic
        }
    }

    pub fn classify_line(&self, l: &Subspace) -> Result<LineClass> {
        if l.rank() != 2 || l.ambient() != 6 {
            return Err(Error::Domain("classify_line expects a line of PG(5,q)".into()));
        }
        let id = self.line_id(l).expect("every line of PG(5,q) is enumerated");
        Ok(self.classify_line_id(id))
    }

    /// Lines of `PG(5,q)` contained in the span of the given points.
    fn lines_in(&self, pts: &[u32]) -> Vec<u32> {
        let mut out = BTreeSet::new();
        for (i, &a) in pts.iter().enumerate() {
            for &b in &pts[i + 1..] {
                out.insert(self.line_through(a, b));
            }
        }
        out.into_iter().collect()
    }

    fn subspace_point_ids(&self, s: &Subspace) -> Vec<u32> {
        s.points(&self.field).iter().map(|p| self.point_id(p)).collect()
    }

    pub fn classify_plane(&self, pi: &Subspace) -> Result<PlaneClass> {
        if pi.rank() != 3 || pi.ambient() != 6 {
            return Err(Error::Domain("classify_plane expects a plane of PG(5,q)".into()));
        }
        let has_hex = self.lines_in(&self.subspace_point_ids(pi)).iter().any(|&l| self.is_hexagon_line(l));
        Ok(class_of_plane(self.space.is_totally_isotropic(pi), has_hex))
    }

    /// The unique totally isotropic plane through an ideal line that contains
    /// hexagon lines, and the common point of those hexagon lines.
    pub fn ideal_centre(&self, l: &Subspace) -> Result<ProjPoint> {
        if self.classify_line(l)? != LineClass::Ideal {
            return Err(Error::Domain("ideal_centre requires an ideal line".into()));
        }
        let planes = self.hexagonal_planes_through(l);
        if planes.len() != 1 {
            return Err(Error::Hypothesis(format!(
                "ideal line lies in {} hexagonal planes, expected exactly 1",
                planes.len()
            )));
        }
        let pts = self.subspace_point_ids(&planes[0]);
        let hex: Vec<u32> = self.lines_in(&pts).into_iter().filter(|&h| self.is_hexagon_line(h)).collect();
        let common: Vec<u32> =
            pts.iter().copied().filter(|&p| hex.iter().all(|&h| self.line_points(h).contains(&p))).collect();
        match common.as_slice() {
            [c] => {
                let centre = self.points[*c as usize].clone();
                if l.contains_point(&self.field, &centre) {
                    return Err(Error::Hypothesis("ideal centre lies on its ideal line".into()));
                }
                Ok(centre)
            }
            _ => Err(Error::Hypothesis("hexagon lines of the plane do not form a pencil".into())),
        }
    }

    /// Totally isotropic planes through a totally isotropic line that contain
    /// at least one hexagon line.
    pub fn hexagonal_planes_through(&self, l: &Subspace) -> Vec<Subspace> {
        let perp = self.space.perp(l);
        let mut planes = BTreeSet::new();
        for x in perp.points(&self.field) {
            if !l.contains_point(&self.field, &x) {
                let pi = l.join(&self.field, &Subspace::span(&self.field, &[x]).expect("point"));
                planes.insert(pi);
            }
        }
        planes
            .into_iter()
            .filter(|pi| {
                self.space.is_totally_isotropic(pi)
                    && self.lines_in(&self.subspace_point_ids(pi)).iter().any(|&h| self.is_hexagon_line(h))
            })
            .collect()
    }

    /// Hexagon lines at hexagon-distance three from every point of a
    /// non-symplectic line.
    pub fn regulus_of(&self, l: &Subspace, distances: &[Vec<u8>]) -> Result<Regulus> {
        if self.classify_line(l)? != LineClass::NonSymplectic {
            return Err(Error::Domain("regulus_of requires a non-symplectic line".into()));
        }
        let pts = self.subspace_point_ids(l);
        let lines: Vec<u32> = self
            .hexagon_lines
            .iter()
            .enumerate()
            .filter(|(i, _)| pts.iter().all(|&p| distances[p as usize][*i] == 3))
            .map(|(_, &h)| h)
            .collect();
        Ok(Regulus { lines, carrier: self.space.perp(l) })
    }

    /// Radical point of the form restricted to a nonsingular plane.
    pub fn pole(&self, pi: &Subspace) -> Result<ProjPoint> {
        if pi.rank() != 3 || pi.ambient() != 6 {
            return Err(Error::Domain("pole expects a plane of PG(5,q)".into()));
        }
        let rad = self.space.radical(pi);
        rad.as_point().ok_or_else(|| Error::Domain("pole is defined for nonsingular planes only".into()))
    }
}

fn class_of_plane(isotropic: bool, has_hexagon_line: bool) -> PlaneClass {
    match (isotropic, has_hexagon_line) {
        (true, true) => PlaneClass::HexagonalSingular,
        (true, false) => PlaneClass::IdealPlane,
        (false, true) => PlaneClass::NonsingularSpecial,
        (false, false) => PlaneClass::NonsingularNonspecial,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Regulus {
    pub lines: Vec<u32>,
    pub carrier: Subspace,
}

/// All lines and planes of `PG(5,q)` with their classes.
#[derive(Debug, Clone)]
pub struct Classification {
    pub line_class: Vec<LineClass>,
    pub planes: Vec<Subspace>,
    pub plane_points: Vec<Vec<u32>>,
    pub plane_lines: Vec<Vec<u32>>,
    pub plane_class: Vec<PlaneClass>,
    plane_index: HashMap<Subspace, u32>,
}

impl Classification {
    pub fn build(model: &HexagonModel) -> Result<Self> {
        Self::build_with_budget(model, projspace::DEFAULT_ENUMERATION_BUDGET)
    }

    pub fn build_with_budget(model: &HexagonModel, budget: u64) -> Result<Self> {
        let field = model.field();
        let line_class: Vec<LineClass> = (0..model.lines().len() as u32).map(|l| model.classify_line_id(l)).collect();
        let planes = enumerate_subspaces(2, 5, field, budget)?;
        let mut plane_points = Vec::with_capacity(planes.len());
        let mut plane_lines = Vec::with_capacity(planes.len());
        let mut plane_class = Vec::with_capacity(planes.len());
        let mut plane_index = HashMap::with_capacity(planes.len());
        for (i, pi) in planes.iter().enumerate() {
            let pts = model.subspace_point_ids(pi);
            let lines = model.lines_in(&pts);
            // a plane is totally isotropic iff all its lines are
            let iso = lines.iter().all(|&l| line_class[l as usize] != LineClass::NonSymplectic);
            let hex = lines.iter().any(|&l| model.is_hexagon_line(l));
            plane_class.push(class_of_plane(iso, hex));
            plane_points.push(pts);
            plane_lines.push(lines);
            plane_index.insert(pi.clone(), i as u32);
        }
        Ok(Classification { line_class, planes, plane_points, plane_lines, plane_class, plane_index })
    }

    pub fn plane_id(&self, pi: &Subspace) -> Option<u32> {
        self.plane_index.get(pi).copied()
    }

    pub fn census(&self, model: &HexagonModel) -> Census {
        let count_l = |c| self.line_class.iter().filter(|&&x| x == c).count();
        let count_p = |c| self.plane_class.iter().filter(|&&x| x == c).count();
        Census {
            q: model.q(),
            line_counts: LineCounts {
                hexagon: count_l(LineClass::Hexagon),
                ideal: count_l(LineClass::Ideal),
                non_symplectic: count_l(LineClass::NonSymplectic),
                total: self.line_class.len(),
            },
            plane_counts: PlaneCounts {
                ideal: count_p(PlaneClass::IdealPlane),
                hexagonal_singular: count_p(PlaneClass::HexagonalSingular),
                nonsingular_special: count_p(PlaneClass::NonsingularSpecial),
                nonsingular_nonspecial: count_p(PlaneClass::NonsingularNonspecial),
                total: self.plane_class.len(),
            },
            gh_check: model.verify_generalized_hexagon(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineCounts {
    pub hexagon: usize,
    pub ideal: usize,
    pub non_symplectic: usize,
    pub total: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlaneCounts {
    pub ideal: usize,
    pub hexagonal_singular: usize,
    pub nonsingular_special: usize,
    pub nonsingular_nonspecial: usize,
    pub total: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Census {
    pub q: usize,
    pub line_counts: LineCounts,
    pub plane_counts: PlaneCounts,
    pub gh_check: GhCheck,
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::OnceLock;

    fn h2() -> &'static (HexagonModel, Classification) {
        static CELL: OnceLock<(HexagonModel, Classification)> = OnceLock::new();
        CELL.get_or_init(|| {
            let f = FiniteField::new(1).unwrap();
            let m = HexagonModel::build(&f).unwrap();
            let c = Classification::build(&m).unwrap();
            (m, c)
        })
    }

    #[test]
    fn hexagon_counts_q2() {
        let (m, _) = h2();
        assert_eq!(m.points().len(), 63);
        assert_eq!(m.hexagon_lines().len(), 63);
        for p in 0..63 {
            assert_eq!(m.hexagon_pencil(p).len(), 3);
        }
        let gh = m.verify_generalized_hexagon();
        assert_eq!(gh.girth, Some(12));
        assert_eq!(gh.diameter, Some(6));
        assert!(gh.passed);
    }

    #[test]
    fn all_symplectic_lines_are_not_a_hexagon() {
        let (m, c) = h2();
        let lines: Vec<Vec<u32>> = (0..m.lines().len())
            .filter(|&l| c.line_class[l] != LineClass::NonSymplectic)
            .map(|l| m.line_points(l as u32).to_vec())
            .collect();
        assert_eq!(lines.len(), 315);
        let gh = verify_generalized_hexagon_lines(63, &lines);
        assert!(!gh.passed);
        assert!(gh.girth.unwrap() < 12);
    }

    #[test]
    fn census_q2() {
        let (m, c) = h2();
        let census = c.census(m);
        assert_eq!(census.line_counts, LineCounts { hexagon: 63, ideal: 252, non_symplectic: 336, total: 651 });
        assert_eq!(
            census.plane_counts,
            PlaneCounts {
                ideal: 72,
                hexagonal_singular: 63,
                nonsingular_special: 756,
                nonsingular_nonspecial: 504,
                total: 1395
            }
        );
        // classification agrees with the subspace-level predicate
        for (i, pi) in c.planes.iter().enumerate().step_by(11) {
            assert_eq!(m.classify_plane(pi).unwrap(), c.plane_class[i]);
        }
        assert!(m.classify_plane(&m.lines()[0]).is_err());
        assert!(m.classify_line(&c.planes[0]).is_err());
    }

    #[test]
    fn hexagon_pencils_span_isotropic_planes() {
        let (m, c) = h2();
        for p in 0..63u32 {
            let pencil = m.hexagon_pencil(p);
            let mut pts: Vec<ProjPoint> = Vec::new();
            for &l in pencil {
                pts.extend(m.lines()[l as usize].points(m.field()));
            }
            let span = Subspace::span(m.field(), &pts).unwrap();
            assert_eq!(span.rank(), 3);
            assert_eq!(c.plane_class[c.plane_id(&span).unwrap() as usize], PlaneClass::HexagonalSingular);
        }
        // every isotropic plane with a hexagon line carries a full pencil
        for (i, lines) in c.plane_lines.iter().enumerate() {
            if c.plane_class[i] == PlaneClass::HexagonalSingular {
                let hex: Vec<u32> = lines.iter().copied().filter(|&l| m.is_hexagon_line(l)).collect();
                assert_eq!(hex.len(), 3);
                let common =
                    c.plane_points[i].iter().filter(|&&p| hex.iter().all(|&h| m.line_points(h).contains(&p))).count();
                assert_eq!(common, 1);
            }
            if c.plane_class[i] == PlaneClass::NonsingularSpecial {
                assert_eq!(lines.iter().filter(|&&l| m.is_hexagon_line(l)).count(), 1);
            }
        }
    }

    #[test]
    fn ideal_centres() {
        let (m, c) = h2();
        let mut checked = 0;
        for (li, l) in m.lines().iter().enumerate() {
            if c.line_class[li] != LineClass::Ideal {
                assert!(c.line_class[li] == LineClass::Hexagon || m.ideal_centre(l).is_err());
                continue;
            }
            assert_eq!(m.hexagonal_planes_through(l).len(), 1);
            let centre = m.ideal_centre(l).unwrap();
            assert!(!l.contains_point(m.field(), &centre));
            checked += 1;
        }
        assert_eq!(checked, 252);
        // centres of the lines of an ideal plane form another ideal plane
        for (i, lines) in c.plane_lines.iter().enumerate() {
            if c.plane_class[i] != PlaneClass::IdealPlane {
                continue;
            }
            let centres: BTreeSet<ProjPoint> =
                lines.iter().map(|&l| m.ideal_centre(&m.lines()[l as usize]).unwrap()).collect();
            assert_eq!(centres.len(), lines.len());
            let pts: Vec<ProjPoint> = centres.into_iter().collect();
            let span = Subspace::span(m.field(), &pts).unwrap();
            assert_eq!(span.rank(), 3);
            let j = c.plane_id(&span).unwrap() as usize;
            assert_eq!(c.plane_class[j], PlaneClass::IdealPlane);
            assert_ne!(i, j);
        }
    }

    #[test]
    fn reguli_and_poles() {
        let (m, c) = h2();
        let dist = m.point_line_distances();
        let mut count = 0;
        for (li, l) in m.lines().iter().enumerate() {
            if c.line_class[li] != LineClass::NonSymplectic {
                continue;
            }
            let r = m.regulus_of(l, &dist).unwrap();
            assert_eq!(r.lines.len(), 3);
            let mut seen = BTreeSet::new();
            for &h in &r.lines {
                for &p in m.line_points(h) {
                    assert!(seen.insert(p), "regulus lines meet");
                    assert!(r.carrier.contains_point(m.field(), &m.points()[p as usize]));
                }
            }
            count += 1;
        }
        assert_eq!(count, 336);
        for (i, pi) in c.planes.iter().enumerate() {
            let class = c.plane_class[i];
            if !class.is_nonsingular() {
                assert!(m.pole(pi).is_err());
                continue;
            }
            let pole = m.pole(pi).unwrap();
            let pid = m.point_id(&pole);
            for &l in &c.plane_lines[i] {
                let sym = c.line_class[l as usize] != LineClass::NonSymplectic;
                assert_eq!(sym, m.line_points(l).contains(&pid));
            }
            if class == PlaneClass::NonsingularSpecial {
                let h = c.plane_lines[i].iter().find(|&&l| m.is_hexagon_line(l)).unwrap();
                assert!(m.line_points(*h).contains(&pid));
            }
        }
        assert!(m.regulus_of(&m.lines()[m.hexagon_lines()[0] as usize], &dist).is_err());
    }
}
