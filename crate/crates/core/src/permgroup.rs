//! Permutation groups: Schreier-Sims, orbits and stabilisers, and the
//! concrete groups `Sp6(2)` and `G2(2)` acting on `PG(5,2)` and on the
//! geometries built from it.
//!
//! Permutations act on the left and compose as functions:
//! `a.compose(b)` applies `b` first.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finfield::FieldElement;
use crate::hexagon::HexagonModel;
use crate::incidence::{ElementId, IncidenceGeometry};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x as usize >= images.len() || std::mem::replace(&mut seen[x as usize], true) {
                return Err(Error::Domain("image list is not a permutation".into()));
            }
        }
        Ok(Permutation(images))
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.0[x as usize]
    }

    /// `self ∘ other`: apply `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self ∘ other ∘ self^-1`.
    pub fn conjugate(&self, other: &Permutation) -> Permutation {
        self.compose(other).compose(&self.inverse())
    }

    /// Restriction to the first `n` points, which must be an invariant set.
    pub fn restrict(&self, n: usize) -> Permutation {
        Permutation(self.0[..n].to_vec())
    }

    /// Image of a set, sorted.
    pub fn apply_set(&self, set: &[u32]) -> Vec<u32> {
        let mut out: Vec<u32> = set.iter().map(|&x| self.apply(x)).collect();
        out.sort_unstable();
        out
    }

    fn first_moved(&self) -> Option<u32> {
        self.0.iter().enumerate().find(|&(i, &x)| i as u32 != x).map(|(i, _)| i as u32)
    }
}

#[derive(Debug, Clone)]
struct Level {
    base: u32,
    gens: Vec<Permutation>,
    orbit: Vec<u32>,
    /// `transversal[b]` maps the base point to `b`.
    transversal: BTreeMap<u32, Permutation>,
}

impl Level {
    fn new(base: u32, gens: Vec<Permutation>, degree: usize) -> Self {
        let mut l = Level { base, gens, orbit: Vec::new(), transversal: BTreeMap::new() };
        l.rebuild(degree);
        l
    }

    fn rebuild(&mut self, degree: usize) {
        self.orbit = vec![self.base];
        self.transversal = BTreeMap::from([(self.base, Permutation::identity(degree))]);
        let mut i = 0;
        while i < self.orbit.len() {
            let b = self.orbit[i];
            for s in &self.gens {
                let c = s.apply(b);
                if !self.transversal.contains_key(&c) {
                    let u = s.compose(&self.transversal[&b]);
                    self.transversal.insert(c, u);
                    self.orbit.push(c);
                }
            }
            i += 1;
        }
    }
}

/// Base and strong generating set.
#[derive(Debug, Clone)]
struct Bsgs {
    levels: Vec<Level>,
}

impl Bsgs {
    /// Residue of sifting `g` from `start`, and the level where it stopped.
    fn sift(&self, mut g: Permutation, start: usize) -> (Permutation, usize) {
        for (i, l) in self.levels.iter().enumerate().skip(start) {
            let b = g.apply(l.base);
            match l.transversal.get(&b) {
                Some(u) => g = u.inverse().compose(&g),
                None => return (g, i),
            }
        }
        (g, self.levels.len())
    }

    fn build(gens: &[Permutation], degree: usize) -> Self {
        let gens: Vec<Permutation> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        let mut base: Vec<u32> = Vec::new();
        for g in &gens {
            if base.iter().all(|&b| g.apply(b) == b) {
                base.push(g.first_moved().expect("non-identity"));
            }
        }
        let fixes_prefix = |g: &Permutation, base: &[u32], i: usize| base[..i].iter().all(|&b| g.apply(b) == b);
        let mut bsgs = Bsgs {
            levels: (0..base.len())
                .map(|i| {
                    let lg = gens.iter().filter(|g| fixes_prefix(g, &base, i)).cloned().collect();
                    Level::new(base[i], lg, degree)
                })
                .collect(),
        };
        let mut i = bsgs.levels.len();
        'outer: while i > 0 {
            let lvl = i - 1;
            let orbit = bsgs.levels[lvl].orbit.clone();
            let lgens = bsgs.levels[lvl].gens.clone();
            for &b in &orbit {
                for s in &lgens {
                    let sb = s.apply(b);
                    let ub = &bsgs.levels[lvl].transversal[&b];
                    let usb = &bsgs.levels[lvl].transversal[&sb];
                    let schreier = usb.inverse().compose(s).compose(ub);
                    if schreier.is_identity() {
                        continue;
                    }
                    let (h, j) = bsgs.sift(schreier, lvl + 1);
                    if h.is_identity() {
                        continue;
                    }
                    if j == bsgs.levels.len() {
                        let b = h.first_moved().expect("non-identity residue");
                        bsgs.levels.push(Level::new(b, Vec::new(), degree));
                    }
                    for l in lvl + 1..=j {
                        bsgs.levels[l].gens.push(h.clone());
                        bsgs.levels[l].rebuild(degree);
                    }
                    i = j + 1;
                    continue 'outer;
                }
            }
            i -= 1;
        }
        bsgs
    }

    fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }
}

#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    bsgs: Bsgs,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if generators.iter().any(|g| g.degree() != degree) {
            return Err(Error::Domain("generator of the wrong degree".into()));
        }
        let bsgs = Bsgs::build(&generators, degree);
        Ok(PermGroup { degree, generators, bsgs })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup { degree, generators: Vec::new(), bsgs: Bsgs { levels: Vec::new() } }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn order(&self) -> u128 {
        self.bsgs.order()
    }

    pub fn base(&self) -> Vec<u32> {
        self.bsgs.levels.iter().map(|l| l.base).collect()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && self.bsgs.sift(g.clone(), 0).0.is_identity()
    }

    /// Group generated by `self` and `g`.
    pub fn extended(&self, g: Permutation) -> PermGroup {
        let mut gens = self.generators.clone();
        gens.push(g);
        let bsgs = Bsgs::build(&gens, self.degree);
        PermGroup { degree: self.degree, generators: gens, bsgs }
    }

    /// Every element, sorted. Intended for groups of modest order.
    pub fn elements(&self) -> Vec<Permutation> {
        let mut out = vec![Permutation::identity(self.degree)];
        for l in self.bsgs.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * l.orbit.len());
            for u in l.transversal.values() {
                for g in &out {
                    next.push(u.compose(g));
                }
            }
            out = next;
        }
        out.sort_unstable();
        out
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.generators.iter().all(|g| other.contains(g))
    }

    pub fn restrict(&self, n: usize) -> Result<PermGroup> {
        PermGroup::new(n, self.generators.iter().map(|g| g.restrict(n)).collect())
    }

    /// Orbit of `start` under an action on keys, with a transversal
    /// (`transversal[i]` maps `start` to `orbit[i]`).
    pub fn orbit_with_transversal<K: Ord + Clone>(
        &self,
        start: &K,
        act: impl Fn(&Permutation, &K) -> K,
    ) -> (Vec<K>, Vec<Permutation>) {
        let mut orbit = vec![start.clone()];
        let mut trans = vec![Permutation::identity(self.degree)];
        let mut index = BTreeMap::from([(start.clone(), 0usize)]);
        let mut i = 0;
        while i < orbit.len() {
            for s in &self.generators {
                let y = act(s, &orbit[i]);
                if !index.contains_key(&y) {
                    index.insert(y.clone(), orbit.len());
                    trans.push(s.compose(&trans[i]));
                    orbit.push(y);
                }
            }
            i += 1;
        }
        (orbit, trans)
    }

    /// Stabiliser of `start` under an action on keys, from Schreier
    /// generators, stopping once the order reaches `|G| / |orbit|`.
    pub fn stabilizer_by<K: Ord + Clone>(&self, start: &K, act: impl Fn(&Permutation, &K) -> K) -> (PermGroup, usize) {
        let (orbit, trans) = self.orbit_with_transversal(start, &act);
        let index: BTreeMap<&K, usize> = orbit.iter().enumerate().map(|(i, k)| (k, i)).collect();
        let target = self.order() / orbit.len() as u128;
        let mut h = PermGroup::trivial(self.degree);
        'done: for (i, x) in orbit.iter().enumerate() {
            for s in &self.generators {
                if h.order() == target {
                    break 'done;
                }
                let j = index[&act(s, x)];
                let sg = trans[j].inverse().compose(s).compose(&trans[i]);
                if !h.contains(&sg) {
                    h = h.extended(sg);
                }
            }
        }
        (h, orbit.len())
    }

    /// Pointwise stabiliser of points, in order.
    pub fn stabilizer_of_points(&self, points: &[u32]) -> PermGroup {
        let mut h = self.clone();
        for &p in points {
            h = h.stabilizer_by(&p, |g, &x| g.apply(x)).0;
        }
        h
    }

    pub fn orbit_of_point(&self, p: u32) -> Vec<u32> {
        let mut o = self.orbit_with_transversal(&p, |g, &x| g.apply(x)).0;
        o.sort_unstable();
        o
    }

    /// Element mapping `from` to `to` under the key action, if any.
    pub fn find_element<K: Ord + Clone>(
        &self,
        from: &K,
        to: &K,
        act: impl Fn(&Permutation, &K) -> K,
    ) -> Option<Permutation> {
        let (orbit, trans) = self.orbit_with_transversal(from, act);
        orbit.iter().position(|k| k == to).map(|i| trans[i].clone())
    }
}

/// Orbit partition of `0..n` under an action on indices; each orbit sorted,
/// orbits ordered by their least element (the canonical representative).
pub fn orbits_on(g: &PermGroup, n: usize, act: impl Fn(&Permutation, usize) -> usize) -> Vec<Vec<usize>> {
    let images: Vec<Vec<usize>> = g.generators().iter().map(|s| (0..n).map(|x| act(s, x)).collect()).collect();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for img in &images {
                let y = img[x];
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                    queue.push_back(y);
                }
            }
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct FlagOrbits {
    pub types: Vec<u8>,
    pub flag_count: usize,
    pub orbit_count: usize,
    pub orbit_sizes: Vec<usize>,
    /// Least flag of each orbit.
    pub representatives: Vec<Vec<ElementId>>,
}

/// Orbits of `g` (acting on element ids) on the flags of the given type.
pub fn flag_orbits(g: &PermGroup, geo: &IncidenceGeometry, types: &[u8]) -> FlagOrbits {
    let flags = geo.flags_of_type(types);
    let index: BTreeMap<&Vec<ElementId>, usize> = flags.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let act = |s: &Permutation, i: usize| {
        let mut img: Vec<ElementId> = flags[i].iter().map(|&x| s.apply(x)).collect();
        img.sort_by_key(|&x| geo.type_of(x));
        index[&img]
    };
    let orbits = orbits_on(g, flags.len(), act);
    FlagOrbits {
        types: types.to_vec(),
        flag_count: flags.len(),
        orbit_count: orbits.len(),
        orbit_sizes: orbits.iter().map(Vec::len).collect(),
        representatives: orbits.iter().map(|o| flags[o[0]].clone()).collect(),
    }
}

/// True iff every generator maps incident pairs to incident pairs and
/// preserves types.
pub fn preserves_geometry(g: &PermGroup, geo: &IncidenceGeometry) -> bool {
    g.degree() == geo.len()
        && g.generators().iter().all(|s| {
            (0..geo.len() as u32).all(|x| geo.type_of(s.apply(x)) == geo.type_of(x))
                && geo.pairs().iter().all(|&(a, b)| geo.incident(s.apply(a), s.apply(b)))
        })
}

/// A flag together with its stabiliser.
#[derive(Debug, Clone)]
pub struct Parabolic {
    pub flag: Vec<ElementId>,
    pub group: PermGroup,
}

impl Parabolic {
    pub fn fixes_flag(&self) -> bool {
        self.group.generators().iter().all(|g| self.flag.iter().all(|&x| g.apply(x) == x))
    }
}

/// Stabiliser of every element of `flag` in a group acting on element ids.
pub fn stabilizer(g: &PermGroup, flag: &[ElementId]) -> Parabolic {
    Parabolic { flag: flag.to_vec(), group: g.stabilizer_of_points(flag) }
}

/// An element of the parabolic mapping `from` to `to`, found by orbit search.
pub fn find_fusion_element(p: &Parabolic, from: ElementId, to: ElementId) -> Result<Permutation> {
    p.group
        .find_element(&from, &to, |g, &x| g.apply(x))
        .ok_or_else(|| Error::Hypothesis(format!("no element of the stabiliser maps {from} to {to}")))
}

/// Orbit sizes of the stabiliser of a flag on the elements of `targets`.
pub fn suborbits(p: &Parabolic, targets: &[ElementId]) -> Vec<Vec<ElementId>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &t in targets {
        if seen.contains(&t) {
            continue;
        }
        let mut o = p.group.orbit_of_point(t);
        o.retain(|x| targets.contains(x));
        seen.extend(o.iter().copied());
        out.push(o);
    }
    out
}

/// Orbits of the stabiliser of an incident line-plane pair on the points of
/// the line.
pub fn line_point_suborbits(
    g: &PermGroup,
    geo: &IncidenceGeometry,
    line: ElementId,
    plane: ElementId,
) -> Result<Vec<Vec<ElementId>>> {
    if geo.type_of(line) != 2 || geo.type_of(plane) != 3 || !geo.incident(line, plane) {
        return Err(Error::Domain("expected an incident line-plane pair".into()));
    }
    let p = stabilizer(g, &[line, plane]);
    let points: Vec<ElementId> = geo.neighbors(line).iter().copied().filter(|&x| geo.type_of(x) == 1).collect();
    Ok(suborbits(&p, &points))
}

/// Transvection `x -> x + B(x,v) v` on the points of the model.
fn transvection(model: &HexagonModel, v: &[FieldElement]) -> Permutation {
    let f = model.field();
    let sp = model.symplectic();
    let images = model
        .points()
        .iter()
        .map(|p| {
            let x = p.coords();
            let c = sp.form(x, v);
            let y: Vec<FieldElement> = x.iter().zip(v).map(|(&a, &b)| f.add(a, f.mul(c, b))).collect();
            model.point_id(&crate::projspace::ProjPoint::new(f, y).expect("transvections are invertible"))
        })
        .collect();
    Permutation(images)
}

/// Vectors whose transvections generate `Sp6(2)`: the standard basis and
/// three sums linking the hyperbolic pairs.
const TRANSVECTION_VECTORS: [[u8; 6]; 9] = [
    [1, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0],
    [0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 1],
    [1, 1, 0, 0, 0, 0],
    [0, 1, 1, 0, 0, 0],
    [1, 1, 1, 1, 1, 1],
];

/// `Sp6(2)` acting on the 63 points of `PG(5,2)`, generated by symplectic
/// transvections.
pub fn sp6_generators(model: &HexagonModel) -> Result<PermGroup> {
    if model.q() != 2 {
        return Err(Error::Config(format!("group computations need q = 2, got q = {}", model.q())));
    }
    let gens = TRANSVECTION_VECTORS.iter().map(|v| transvection(model, &v.map(FieldElement))).collect();
    PermGroup::new(model.points().len(), gens)
}

/// Image of a line (id into the model's line list) under a point permutation.
pub fn act_on_line(model: &HexagonModel, g: &Permutation, line: u32) -> u32 {
    let pts = model.line_points(line);
    model.line_through(g.apply(pts[0]), g.apply(pts[1]))
}

/// Result of the set-stabiliser computation for the hexagon line set.
#[derive(Debug, Clone)]
pub struct HexagonStabilizer {
    pub group: PermGroup,
    pub orbit_length: usize,
}

/// Stabiliser in `sp` of the set of hexagon lines. The orbit of the line set
/// is keyed by the sorted list of line ids, so equal keys are equal sets.
pub fn hexagon_stabilizer(sp: &PermGroup, model: &HexagonModel) -> HexagonStabilizer {
    let start: Vec<u32> = model.hexagon_lines().to_vec();
    let act = |g: &Permutation, set: &Vec<u32>| {
        let mut img: Vec<u32> = set.iter().map(|&l| act_on_line(model, g, l)).collect();
        img.sort_unstable();
        img
    };
    let (group, orbit_length) = sp.stabilizer_by(&start, act);
    HexagonStabilizer { group, orbit_length }
}

/// Extends point permutations to a geometry whose elements are determined by
/// the sets of base elements (`0..base`) they are incident with.
#[derive(Debug, Clone)]
pub struct ShadowAction {
    base: usize,
    shadows: Vec<Vec<u32>>,
    lookup: BTreeMap<(u8, Vec<u32>), ElementId>,
    types: Vec<u8>,
}

impl ShadowAction {
    pub fn new(geo: &IncidenceGeometry, base: usize) -> Result<Self> {
        let shadows: Vec<Vec<u32>> = (0..geo.len() as u32)
            .map(|x| {
                if (x as usize) < base {
                    vec![x]
                } else {
                    geo.neighbors(x).iter().copied().filter(|&y| (y as usize) < base).collect()
                }
            })
            .collect();
        let mut lookup = BTreeMap::new();
        for (x, s) in shadows.iter().enumerate() {
            if lookup.insert((geo.type_of(x as u32), s.clone()), x as u32).is_some() {
                return Err(Error::Domain(format!("element {x} is not determined by its shadow")));
            }
        }
        Ok(ShadowAction { base, shadows, lookup, types: geo.types().to_vec() })
    }

    /// Image of element `x`, or `None` if the shadow image is not an element.
    pub fn act(&self, g: &Permutation, x: ElementId) -> Option<ElementId> {
        let img = g.apply_set(&self.shadows[x as usize]);
        self.lookup.get(&(self.types[x as usize], img)).copied()
    }

    /// The full permutation of elements induced by a base permutation.
    pub fn extend(&self, g: &Permutation) -> Result<Permutation> {
        if g.degree() != self.base {
            return Err(Error::Domain("base permutation of the wrong degree".into()));
        }
        let images = (0..self.types.len() as u32)
            .map(|x| self.act(g, x).ok_or_else(|| Error::Hypothesis(format!("element {x} has no image"))))
            .collect::<Result<Vec<u32>>>()?;
        Permutation::from_images(images)
    }

    pub fn extend_group(&self, g: &PermGroup) -> Result<PermGroup> {
        let gens = g.generators().iter().map(|s| self.extend(s)).collect::<Result<Vec<_>>>()?;
        PermGroup::new(self.types.len(), gens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finfield::FiniteField;
    use crate::hexagon::{Classification, LineClass, PlaneClass};
    use crate::incidence::build_gamma;
    use crate::projspace::Subspace;
    use std::sync::OnceLock;

    struct Fixture {
        model: HexagonModel,
        cls: Classification,
        sp: PermGroup,
        g2: HexagonStabilizer,
    }

    fn fixture() -> &'static Fixture {
        static CELL: OnceLock<Fixture> = OnceLock::new();
        CELL.get_or_init(|| {
            let f = FiniteField::new(1).unwrap();
            let model = HexagonModel::build(&f).unwrap();
            let cls = Classification::build(&model).unwrap();
            let sp = sp6_generators(&model).unwrap();
            let g2 = hexagon_stabilizer(&sp, &model);
            Fixture { model, cls, sp, g2 }
        })
    }

    fn sym(n: usize) -> PermGroup {
        let mut cycle: Vec<u32> = (1..n as u32).collect();
        cycle.push(0);
        let mut swap: Vec<u32> = (0..n as u32).collect();
        swap.swap(0, 1);
        PermGroup::new(n, vec![Permutation(cycle), Permutation(swap)]).unwrap()
    }

    #[test]
    fn symmetric_group_orders() {
        for n in 2..=8 {
            let s = sym(n);
            assert_eq!(s.order(), (1..=n as u128).product::<u128>());
        }
        let s5 = sym(5);
        assert_eq!(s5.elements().len(), 120);
        // alternating group from 3-cycles
        let a5 = PermGroup::new(5, vec![Permutation(vec![1, 2, 0, 3, 4]), Permutation(vec![0, 1, 3, 4, 2])]).unwrap();
        assert_eq!(a5.order(), 60);
        assert!(a5.is_subgroup_of(&s5));
        assert!(!a5.contains(&Permutation(vec![1, 0, 2, 3, 4])));
        assert_eq!(PermGroup::trivial(4).order(), 1);
    }

    #[test]
    fn permutation_basics() {
        let a = Permutation(vec![1, 2, 0]);
        let b = Permutation(vec![1, 0, 2]);
        assert_eq!(a.compose(&b).images(), &[2, 1, 0]);
        assert!(a.compose(&a.inverse()).is_identity());
        assert!(Permutation::from_images(vec![0, 0]).is_err());
        assert_eq!(a.apply_set(&[0, 1]), vec![1, 2]);
    }

    #[test]
    fn stabilizer_orbit_relation() {
        let s6 = sym(6);
        let (h, len) = s6.stabilizer_by(&vec![0u32, 1], |g, s| g.apply_set(s));
        assert_eq!(len, 15);
        assert_eq!(h.order() * 15, 720);
        assert_eq!(s6.stabilizer_of_points(&[0, 1, 2]).order(), 6);
        let orbs = orbits_on(&h, 6, |g, x| g.apply(x as u32) as usize);
        assert_eq!(orbs, vec![vec![0, 1], vec![2, 3, 4, 5]]);
    }

    #[test]
    fn sp6_order_and_form() {
        let fx = fixture();
        assert_eq!(fx.sp.order(), 1_451_520);
        let q: u128 = 2;
        assert_eq!(fx.sp.order(), q.pow(9) * (q.pow(2) - 1) * (q.pow(4) - 1) * (q.pow(6) - 1));
        let pts = fx.model.points();
        let sp = fx.model.symplectic();
        for g in fx.sp.generators() {
            for a in 0..pts.len() {
                for b in 0..pts.len() {
                    let before = sp.form(pts[a].coords(), pts[b].coords());
                    let after =
                        sp.form(pts[g.apply(a as u32) as usize].coords(), pts[g.apply(b as u32) as usize].coords());
                    assert_eq!(before, after);
                }
            }
        }
        assert_eq!(fx.sp.orbit_of_point(0).len(), 63);
    }

    #[test]
    fn g2_is_the_hexagon_stabilizer() {
        let fx = fixture();
        assert_eq!(fx.g2.orbit_length, 120);
        assert_eq!(fx.g2.group.order(), 12096);
        assert_eq!(fx.g2.group.order() * 120, fx.sp.order());
        for g in fx.g2.group.generators() {
            for &l in fx.model.hexagon_lines() {
                assert!(fx.model.is_hexagon_line(act_on_line(&fx.model, g, l)));
            }
        }
    }

    #[test]
    fn g2_preserves_the_classification() {
        let fx = fixture();
        let m = &fx.model;
        let c = &fx.cls;
        for g in fx.g2.group.generators() {
            for l in 0..m.lines().len() as u32 {
                assert_eq!(c.line_class[act_on_line(m, g, l) as usize], c.line_class[l as usize]);
            }
            for (i, pl) in c.planes.iter().enumerate() {
                let pts: Vec<_> = c.plane_points[i].iter().map(|&p| m.points()[g.apply(p) as usize].clone()).collect();
                let img = Subspace::span(m.field(), &pts).unwrap();
                let j = c.plane_id(&img).unwrap();
                assert_eq!(c.plane_class[j as usize], c.plane_class[i]);
                assert_eq!(pl.rank(), 3);
            }
        }
        // line classes are full orbits
        let lines = orbits_on(&fx.g2.group, m.lines().len(), |g, l| act_on_line(m, g, l as u32) as usize);
        let sizes: BTreeSet<(LineClass, usize)> = lines.iter().map(|o| (c.line_class[o[0]], o.len())).collect();
        assert_eq!(
            sizes,
            BTreeSet::from([(LineClass::Hexagon, 63), (LineClass::Ideal, 252), (LineClass::NonSymplectic, 336)])
        );
        let _ = PlaneClass::IdealPlane;
    }

    #[test]
    fn orbit_claims_on_gamma_geometries() {
        let fx = fixture();
        let g1 = build_gamma(1, &fx.model, &fx.cls).unwrap();
        let g2 = build_gamma(2, &fx.model, &fx.cls).unwrap();
        let act1 = ShadowAction::new(&g1.geometry, 63).unwrap().extend_group(&fx.g2.group).unwrap();
        let act2 = ShadowAction::new(&g2.geometry, 63).unwrap().extend_group(&fx.g2.group).unwrap();
        assert!(preserves_geometry(&act1, &g1.geometry));
        assert!(preserves_geometry(&act2, &g2.geometry));
        assert_eq!(act2.order(), 12096);
        assert_eq!(flag_orbits(&act1, &g1.geometry, &[1, 2, 3]).orbit_count, 1);
        for t in [1u8, 2, 3] {
            assert_eq!(flag_orbits(&act2, &g2.geometry, &[t]).orbit_count, 1);
        }
        assert_eq!(flag_orbits(&act2, &g2.geometry, &[1, 2]).orbit_count, 1);
        assert_eq!(flag_orbits(&act2, &g2.geometry, &[2, 3]).orbit_count, 1);
        let pp = flag_orbits(&act2, &g2.geometry, &[1, 3]);
        assert_eq!(pp.orbit_count, 2);
        let ch = flag_orbits(&act2, &g2.geometry, &[1, 2, 3]);
        let mut sizes = ch.orbit_sizes.clone();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![3024, 6048]);

        // stabiliser orders
        let geo = &g2.geometry;
        let p = geo.elements_of_type(1)[0];
        let l = geo.elements_of_type(2)[0];
        let pi = geo.elements_of_type(3)[0];
        assert_eq!(stabilizer(&act2, &[p]).group.order(), 192);
        assert_eq!(stabilizer(&act2, &[l]).group.order(), 36);
        assert_eq!(stabilizer(&act2, &[pi]).group.order(), 16);
        assert!(stabilizer(&act2, &[pi]).fixes_flag());
    }

    #[test]
    fn line_point_suborbits_fix_the_hexagon_point() {
        let fx = fixture();
        let g2 = build_gamma(2, &fx.model, &fx.cls).unwrap();
        let act = ShadowAction::new(&g2.geometry, 63).unwrap().extend_group(&fx.g2.group).unwrap();
        let geo = &g2.geometry;
        for l in geo.elements_of_type(2).into_iter().take(5) {
            for &pi in geo.neighbors(l).iter().filter(|&&x| geo.type_of(x) == 3) {
                let orbs = line_point_suborbits(&act, geo, l, pi).unwrap();
                let mut sizes: Vec<usize> = orbs.iter().map(Vec::len).collect();
                sizes.sort_unstable();
                assert_eq!(sizes, vec![1, 2]);
                let fixed = orbs.iter().find(|o| o.len() == 1).unwrap()[0];
                let crate::incidence::Source::Plane(pid) = g2.sources[pi as usize] else { panic!() };
                let hex: Vec<u32> =
                    fx.cls.plane_lines[pid as usize].iter().copied().filter(|&x| fx.model.is_hexagon_line(x)).collect();
                assert_eq!(hex.len(), 1);
                assert!(fx.model.line_points(hex[0]).contains(&fixed));
            }
        }
        assert!(line_point_suborbits(&act, geo, 0, 1).is_err());
    }
}
