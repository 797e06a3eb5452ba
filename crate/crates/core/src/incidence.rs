//! Typed incidence structures (pregeometries) and the concrete geometries
//! `Γ0`..`Γ3` on `W(5,q)`.
//!
//! Elements are numbered globally and grouped by type in ascending type
//! order; within a type they follow the canonical enumeration of their
//! payload, so `(type, index within type)` is a stable reference.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hexagon::{Classification, HexagonModel, LineClass, PlaneClass};
use crate::projspace::Subspace;

pub type ElementId = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceGeometry {
    type_set: Vec<u8>,
    types: Vec<u8>,
    adj: Vec<Vec<ElementId>>,
    keys: Option<Vec<Subspace>>,
}

/// Basic diagram: a graph on the type set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypeDiagram {
    pub types: Vec<u8>,
    pub edges: Vec<(u8, u8)>,
}

impl TypeDiagram {
    pub fn new(types: Vec<u8>, edges: Vec<(u8, u8)>) -> Self {
        let mut edges: Vec<(u8, u8)> = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        edges.sort_unstable();
        edges.dedup();
        TypeDiagram { types, edges }
    }

    /// The string `t0 - t1 - ... - tn`.
    pub fn string(types: &[u8]) -> Self {
        Self::new(types.to_vec(), types.windows(2).map(|w| (w[0], w[1])).collect())
    }

    pub fn adjacent(&self, a: u8, b: u8) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    /// Connected components of the subgraph induced on `subset`.
    pub fn components(&self, subset: &[u8]) -> Vec<Vec<u8>> {
        let mut remaining: BTreeSet<u8> = subset.iter().copied().collect();
        let mut out = Vec::new();
        while let Some(&start) = remaining.iter().next() {
            remaining.remove(&start);
            let mut comp = vec![start];
            let mut i = 0;
            while i < comp.len() {
                let t = comp[i];
                let next: Vec<u8> = remaining.iter().copied().filter(|&u| self.adjacent(t, u)).collect();
                for u in next {
                    remaining.remove(&u);
                    comp.push(u);
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_tree(&self) -> bool {
        !self.types.is_empty() && self.edges.len() + 1 == self.types.len() && self.components(&self.types).len() == 1
    }

    /// Unique path between two types of a tree diagram.
    pub fn geodesic(&self, from: u8, to: u8) -> Option<Vec<u8>> {
        let mut prev: BTreeMap<u8, u8> = BTreeMap::new();
        let mut queue = VecDeque::from([from]);
        let mut seen = BTreeSet::from([from]);
        while let Some(t) = queue.pop_front() {
            if t == to {
                let mut path = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = prev[&cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for &u in &self.types {
                if self.adjacent(t, u) && seen.insert(u) {
                    prev.insert(u, t);
                    queue.push_back(u);
                }
            }
        }
        None
    }
}

impl IncidenceGeometry {
    /// `types[x]` is the type of element `x`; types must be non-decreasing.
    /// Incidence pairs are symmetrized and deduplicated.
    pub fn new(types: Vec<u8>, pairs: impl IntoIterator<Item = (ElementId, ElementId)>) -> Result<Self> {
        if types.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Domain("elements must be grouped by ascending type".into()));
        }
        let mut type_set = types.clone();
        type_set.dedup();
        let n = types.len();
        let mut adj = vec![Vec::new(); n];
        for (a, b) in pairs {
            if a as usize >= n || b as usize >= n {
                return Err(Error::Domain(format!("incidence pair ({a},{b}) out of range")));
            }
            if types[a as usize] == types[b as usize] {
                return Err(Error::Domain(format!("elements {a} and {b} have the same type")));
            }
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
        }
        Ok(IncidenceGeometry { type_set, types, adj, keys: None })
    }

    pub fn with_keys(mut self, keys: Vec<Subspace>) -> Result<Self> {
        if keys.len() != self.types.len() {
            return Err(Error::Domain("one key per element required".into()));
        }
        self.keys = Some(keys);
        Ok(self)
    }

    pub fn keys(&self) -> Option<&[Subspace]> {
        self.keys.as_deref()
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn type_set(&self) -> &[u8] {
        &self.type_set
    }

    pub fn rank(&self) -> usize {
        self.type_set.len()
    }

    pub fn type_of(&self, x: ElementId) -> u8 {
        self.types[x as usize]
    }

    pub fn types(&self) -> &[u8] {
        &self.types
    }

    pub fn neighbors(&self, x: ElementId) -> &[ElementId] {
        &self.adj[x as usize]
    }

    pub fn incident(&self, x: ElementId, y: ElementId) -> bool {
        self.adj[x as usize].binary_search(&y).is_ok()
    }

    pub fn elements_of_type(&self, t: u8) -> Vec<ElementId> {
        (0..self.len() as u32).filter(|&x| self.types[x as usize] == t).collect()
    }

    pub fn count_of_type(&self, t: u8) -> usize {
        self.types.iter().filter(|&&u| u == t).count()
    }

    /// `(type, index within type)` of an element.
    pub fn element_ref(&self, x: ElementId) -> (u8, usize) {
        let t = self.types[x as usize];
        let first = self.types.partition_point(|&u| u < t);
        (t, x as usize - first)
    }

    /// Ascending list of incident pairs `(a, b)` with `a < b`.
    pub fn pairs(&self) -> Vec<(ElementId, ElementId)> {
        let mut out = Vec::new();
        for (a, list) in self.adj.iter().enumerate() {
            for &b in list {
                if (a as u32) < b {
                    out.push((a as u32, b));
                }
            }
        }
        out
    }

    pub fn is_flag(&self, f: &[ElementId]) -> bool {
        let mut seen = BTreeSet::new();
        f.iter().all(|&x| (x as usize) < self.len() && seen.insert(self.type_of(x)))
            && f.iter().enumerate().all(|(i, &x)| f[i + 1..].iter().all(|&y| self.incident(x, y)))
    }

    /// Induced substructure on `keep` (sorted, type-grouped), returning the
    /// sub-geometry and the map from new ids to old ids.
    pub fn induced(&self, keep: &[ElementId]) -> (IncidenceGeometry, Vec<ElementId>) {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let index: BTreeMap<ElementId, u32> = keep.iter().enumerate().map(|(i, &x)| (x, i as u32)).collect();
        let types: Vec<u8> = keep.iter().map(|&x| self.type_of(x)).collect();
        let mut adj = vec![Vec::new(); keep.len()];
        for (i, &x) in keep.iter().enumerate() {
            adj[i] = self.adj[x as usize].iter().filter_map(|y| index.get(y).copied()).collect();
        }
        let mut type_set = types.clone();
        type_set.dedup();
        let keys = self.keys.as_ref().map(|k| keep.iter().map(|&x| k[x as usize].clone()).collect());
        (IncidenceGeometry { type_set, types, adj, keys }, keep)
    }

    /// Residue of a flag: elements incident with every member, of types not
    /// in the flag.
    pub fn residue(&self, flag: &[ElementId]) -> Result<(IncidenceGeometry, Vec<ElementId>)> {
        if !self.is_flag(flag) {
            return Err(Error::Domain("residue requires a flag".into()));
        }
        Ok(self.induced(&self.residue_elements(flag)))
    }

    fn residue_elements(&self, flag: &[ElementId]) -> Vec<ElementId> {
        let ftypes: BTreeSet<u8> = flag.iter().map(|&x| self.type_of(x)).collect();
        match flag.first() {
            None => (0..self.len() as u32).collect(),
            Some(&x0) => self.adj[x0 as usize]
                .iter()
                .copied()
                .filter(|&y| !ftypes.contains(&self.type_of(y)) && flag[1..].iter().all(|&x| self.incident(x, y)))
                .collect(),
        }
    }

    pub fn truncation(&self, types: &[u8]) -> (IncidenceGeometry, Vec<ElementId>) {
        let keep: Vec<ElementId> = (0..self.len() as u32).filter(|&x| types.contains(&self.type_of(x))).collect();
        self.induced(&keep)
    }

    /// All flags whose type set is exactly `types`, each listed in ascending
    /// type order, in lexicographic order.
    pub fn flags_of_type(&self, types: &[u8]) -> Vec<Vec<ElementId>> {
        let mut types = types.to_vec();
        types.sort_unstable();
        types.dedup();
        let mut out = Vec::new();
        if types.is_empty() {
            out.push(Vec::new());
            return out;
        }
        let mut current = Vec::with_capacity(types.len());
        for x in self.elements_of_type(types[0]) {
            current.push(x);
            self.extend_flags(&types[1..], &mut current, &mut out);
            current.pop();
        }
        out
    }

    fn extend_flags(&self, types: &[u8], current: &mut Vec<ElementId>, out: &mut Vec<Vec<ElementId>>) {
        let Some((&t, rest)) = types.split_first() else {
            out.push(current.clone());
            return;
        };
        let candidates: Vec<ElementId> = self.adj[current[0] as usize]
            .iter()
            .copied()
            .filter(|&y| self.type_of(y) == t && current[1..].iter().all(|&x| self.incident(x, y)))
            .collect();
        for y in candidates {
            current.push(y);
            self.extend_flags(rest, current, out);
            current.pop();
        }
    }

    pub fn chambers(&self) -> Vec<Vec<ElementId>> {
        self.flags_of_type(&self.type_set.clone())
    }

    /// Every flag that is not a chamber extends by an element of a missing
    /// type; equivalently every maximal flag is a chamber.
    pub fn is_geometry(&self) -> bool {
        let n = self.rank();
        for mask in 1u32..(1 << n) - 1 {
            let types: Vec<u8> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| self.type_set[i]).collect();
            for f in self.flags_of_type(&types) {
                if self.residue_elements(&f).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    /// True iff every element of type `i` is incident with every element of
    /// type `j`.
    pub fn is_generalised_digon(&self, i: u8, j: u8) -> bool {
        let js = self.count_of_type(j);
        (0..self.len() as u32)
            .filter(|&x| self.type_of(x) == i)
            .all(|x| self.adj[x as usize].iter().filter(|&&y| self.type_of(y) == j).count() == js)
    }

    /// True iff every residue of type `{i, j}` is a generalised digon.
    pub fn digon_check(&self, i: u8, j: u8) -> bool {
        let cotype: Vec<u8> = self.type_set.iter().copied().filter(|&t| t != i && t != j).collect();
        self.flags_of_type(&cotype).iter().all(|f| {
            let (res, _) = self.induced(&self.residue_elements(f));
            res.is_generalised_digon(i, j)
        })
    }

    pub fn basic_diagram(&self) -> TypeDiagram {
        let mut edges = Vec::new();
        for (a, &i) in self.type_set.iter().enumerate() {
            for &j in &self.type_set[a + 1..] {
                if !self.digon_check(i, j) {
                    edges.push((i, j));
                }
            }
        }
        TypeDiagram::new(self.type_set.clone(), edges)
    }

    /// Every residue is the direct sum of its truncations to the connected
    /// components of the diagram restricted to its type set. Returns the first
    /// violating flag and pair, if any.
    pub fn direct_sum_violation(&self, diagram: &TypeDiagram) -> Option<(Vec<ElementId>, ElementId, ElementId)> {
        let n = self.rank();
        for mask in 0u32..(1 << n) {
            let ftypes: Vec<u8> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| self.type_set[i]).collect();
            let cotypes: Vec<u8> = self.type_set.iter().copied().filter(|t| !ftypes.contains(t)).collect();
            let comps = diagram.components(&cotypes);
            if comps.len() < 2 {
                continue;
            }
            let comp_of = |t: u8| comps.iter().position(|c| c.contains(&t)).expect("type in some component");
            for f in self.flags_of_type(&ftypes) {
                let res = self.residue_elements(&f);
                for (a, &x) in res.iter().enumerate() {
                    for &y in &res[a + 1..] {
                        if comp_of(self.type_of(x)) != comp_of(self.type_of(y)) && !self.incident(x, y) {
                            return Some((f, x, y));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn direct_sum_check(&self, diagram: &TypeDiagram) -> bool {
        self.direct_sum_violation(diagram).is_none()
    }

    pub fn is_connected(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.len()];
        seen[0] = true;
        let mut queue = VecDeque::from([0u32]);
        let mut count = 1;
        while let Some(x) = queue.pop_front() {
            for &y in &self.adj[x as usize] {
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    count += 1;
                    queue.push_back(y);
                }
            }
        }
        count == self.len()
    }

    /// Diameter of the graph on type-`point_type` elements, two being adjacent
    /// when they share a type-`line_type` element. `None` if disconnected.
    pub fn collinearity_diameter(&self, point_type: u8, line_type: u8) -> Option<usize> {
        let points = self.elements_of_type(point_type);
        let pos: BTreeMap<ElementId, usize> = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let nbrs: Vec<Vec<usize>> = points
            .iter()
            .map(|&p| {
                let mut v: Vec<usize> = self.adj[p as usize]
                    .iter()
                    .filter(|&&l| self.type_of(l) == line_type)
                    .flat_map(|&l| self.adj[l as usize].iter())
                    .filter_map(|r| pos.get(r).copied())
                    .filter(|&r| points[r] != p)
                    .collect();
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect();
        let mut diameter = 0;
        for root in 0..points.len() {
            let mut dist = vec![usize::MAX; points.len()];
            dist[root] = 0;
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for &v in &nbrs[u] {
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            let far = *dist.iter().max()?;
            if far == usize::MAX {
                return None;
            }
            diameter = diameter.max(far);
        }
        Some(diameter)
    }

    /// Join of two rank-3 geometries over `{1,2,3}` with identical `{1,2}`
    /// truncations: shared points and lines, and the union of both plane
    /// sets. With payload keys the plane fibers are merged in key order.
    pub fn join(&self, other: &IncidenceGeometry) -> Result<IncidenceGeometry> {
        if self.type_set != [1, 2, 3] || other.type_set != [1, 2, 3] {
            return Err(Error::Domain("join expects geometries over {1,2,3}".into()));
        }
        let (t1, _) = self.truncation(&[1, 2]);
        let (t2, _) = other.truncation(&[1, 2]);
        if t1 != t2 {
            return Err(Error::Domain("point-line truncations differ".into()));
        }
        let base = t1.len() as u32;
        // (key, source, old id) for every plane of either geometry
        let mut planes: Vec<(Option<&Subspace>, usize, ElementId)> = Vec::new();
        for (src, g) in [self, other].into_iter().enumerate() {
            for x in g.elements_of_type(3) {
                planes.push((g.keys.as_ref().map(|k| &k[x as usize]), src, x));
            }
        }
        if self.keys.is_some() && other.keys.is_some() {
            planes.sort_by(|a, b| a.0.cmp(&b.0));
            if planes.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(Error::Domain("plane sets are not disjoint".into()));
            }
        }
        let mut types = t1.types.clone();
        types.extend(std::iter::repeat_n(3u8, planes.len()));
        let mut pairs = t1.pairs();
        for (i, &(_, src, x)) in planes.iter().enumerate() {
            let g = if src == 0 { self } else { other };
            // points and lines keep their ids across the truncation
            for &y in g.neighbors(x) {
                pairs.push((y, base + i as u32));
            }
        }
        let mut out = IncidenceGeometry::new(types, pairs)?;
        if let (Some(k1), Some(_)) = (&t1.keys, &other.keys) {
            let mut keys = k1.clone();
            keys.extend(planes.iter().map(|p| p.0.expect("keyed").clone()));
            out = out.with_keys(keys)?;
        }
        Ok(out)
    }

    pub fn to_json(&self, q: Option<usize>, variant: Option<u8>) -> GeometryJson {
        GeometryJson {
            q,
            variant,
            elements: self.types.iter().enumerate().map(|(i, &t)| ElementJson { id: i as u32, r#type: t }).collect(),
            incidence: self.pairs().into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }

    pub fn from_json(g: &GeometryJson) -> Result<Self> {
        if g.elements.iter().enumerate().any(|(i, e)| e.id as usize != i) {
            return Err(Error::Domain("element ids must be 0..n in order".into()));
        }
        let types = g.elements.iter().map(|e| e.r#type).collect();
        Self::new(types, g.incidence.iter().map(|p| (p[0], p[1])))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub id: u32,
    #[serde(rename = "type")]
    pub r#type: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometryJson {
    pub q: Option<usize>,
    pub variant: Option<u8>,
    pub elements: Vec<ElementJson>,
    pub incidence: Vec<[u32; 2]>,
}

/// Which object of `PG(5,q)` an element of a `Γ` geometry is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Point(u32),
    Line(u32),
    Plane(u32),
}

/// One of the geometries `Γ0`..`Γ3` together with the `PG(5,q)` object each
/// element stands for.
#[derive(Debug, Clone)]
pub struct Gamma {
    pub variant: u8,
    pub q: usize,
    pub geometry: IncidenceGeometry,
    pub sources: Vec<Source>,
}

impl Gamma {
    pub fn to_json(&self) -> GeometryJson {
        self.geometry.to_json(Some(self.q), Some(self.variant))
    }

    /// Element id of a `PG(5,q)` object, if it belongs to this geometry.
    pub fn element_of(&self, s: Source) -> Option<ElementId> {
        let t = match s {
            Source::Point(_) => 1,
            Source::Line(_) => 2,
            Source::Plane(_) => 3,
        };
        let lo = self.geometry.types.partition_point(|&u| u < t);
        let hi = self.geometry.types.partition_point(|&u| u <= t);
        let key = |x: &Source| match *x {
            Source::Point(i) | Source::Line(i) | Source::Plane(i) => i,
        };
        let id = match s {
            Source::Point(i) | Source::Line(i) | Source::Plane(i) => i,
        };
        self.sources[lo..hi].binary_search_by_key(&id, key).ok().map(|off| (lo + off) as u32)
    }
}

/// Build `Γ_variant` over `GF(q)`.
///
/// `Γ0`, `Γ1`, `Γ2`: points of `PG(5,q)`, non-symplectic lines, and all /
/// nonspecial / special nonsingular planes. Point-plane incidence holds when
/// some line of the geometry is incident with both.
/// `Γ3`: points, ideal lines and ideal planes with containment.
pub fn build_gamma(variant: u8, model: &HexagonModel, cls: &Classification) -> Result<Gamma> {
    let keep_line: Box<dyn Fn(LineClass) -> bool> = match variant {
        0..=2 => Box::new(|c| c == LineClass::NonSymplectic),
        3 => Box::new(|c| c == LineClass::Ideal),
        _ => return Err(Error::Config(format!("unknown geometry variant {variant}"))),
    };
    let keep_plane = |c: PlaneClass| match variant {
        0 => c.is_nonsingular(),
        1 => c == PlaneClass::NonsingularNonspecial,
        2 => c == PlaneClass::NonsingularSpecial,
        _ => c == PlaneClass::IdealPlane,
    };
    let n_points = model.points().len() as u32;
    let lines: Vec<u32> = (0..cls.line_class.len() as u32).filter(|&l| keep_line(cls.line_class[l as usize])).collect();
    let planes: Vec<u32> =
        (0..cls.plane_class.len() as u32).filter(|&p| keep_plane(cls.plane_class[p as usize])).collect();

    let mut line_elem = vec![u32::MAX; cls.line_class.len()];
    for (i, &l) in lines.iter().enumerate() {
        line_elem[l as usize] = n_points + i as u32;
    }
    let plane_base = n_points + lines.len() as u32;

    let mut pairs = Vec::new();
    for (i, &l) in lines.iter().enumerate() {
        for &p in model.line_points(l) {
            pairs.push((p, n_points + i as u32));
        }
    }
    for (i, &pl) in planes.iter().enumerate() {
        let e = plane_base + i as u32;
        let mut pts = BTreeSet::new();
        for &l in &cls.plane_lines[pl as usize] {
            if line_elem[l as usize] != u32::MAX {
                pairs.push((line_elem[l as usize], e));
                if variant <= 2 {
                    // a witness line of the geometry joins its points to the plane
                    pts.extend(model.line_points(l).iter().copied());
                }
            }
        }
        if variant == 3 {
            pts.extend(cls.plane_points[pl as usize].iter().copied());
        }
        pairs.extend(pts.into_iter().map(|p| (p, e)));
    }

    let mut types = vec![1u8; n_points as usize];
    types.extend(std::iter::repeat_n(2u8, lines.len()));
    types.extend(std::iter::repeat_n(3u8, planes.len()));
    let mut keys: Vec<Subspace> =
        model.points().iter().map(|p| Subspace::span(model.field(), std::slice::from_ref(p)).expect("point")).collect();
    keys.extend(lines.iter().map(|&l| model.lines()[l as usize].clone()));
    keys.extend(planes.iter().map(|&p| cls.planes[p as usize].clone()));
    let geometry = IncidenceGeometry::new(types, pairs)?.with_keys(keys)?;

    let mut sources: Vec<Source> = (0..n_points).map(Source::Point).collect();
    sources.extend(lines.iter().map(|&l| Source::Line(l)));
    sources.extend(planes.iter().map(|&p| Source::Plane(p)));
    Ok(Gamma { variant, q: model.q(), geometry, sources })
}
