//! Flag complexes of rank-3 geometries, edge-path group presentations and
//! the number of sheets of the universal cover.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fpgroup::{self, gen_letter, Presentation, Word};
use crate::incidence::IncidenceGeometry;

pub const DEFAULT_COSET_CAP: usize = 1_000_000;

/// A 2-dimensional simplicial complex with sorted simplices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialComplex2 {
    pub vertices: usize,
    pub edges: Vec<[u32; 2]>,
    pub triangles: Vec<[u32; 3]>,
}

impl SimplicialComplex2 {
    /// Sorts and deduplicates; checks that triangle edges are present.
    pub fn new(vertices: usize, edges: Vec<[u32; 2]>, triangles: Vec<[u32; 3]>) -> Result<Self> {
        let mut edges: Vec<[u32; 2]> = edges.into_iter().map(|[a, b]| [a.min(b), a.max(b)]).collect();
        edges.sort_unstable();
        edges.dedup();
        if edges.iter().any(|&[a, b]| a == b || b as usize >= vertices) {
            return Err(Error::Domain("edge with a repeated or unknown vertex".into()));
        }
        let mut triangles: Vec<[u32; 3]> = triangles
            .into_iter()
            .map(|mut t| {
                t.sort_unstable();
                t
            })
            .collect();
        triangles.sort_unstable();
        triangles.dedup();
        for &[a, b, c] in &triangles {
            for e in [[a, b], [b, c], [a, c]] {
                if edges.binary_search(&e).is_err() {
                    return Err(Error::Domain(format!("triangle {a},{b},{c} lacks edge {e:?}")));
                }
            }
        }
        Ok(SimplicialComplex2 { vertices, edges, triangles })
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }

    fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.vertices];
        for &[a, b] in &self.edges {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        for l in adj.iter_mut() {
            l.sort_unstable();
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices == 0 {
            return true;
        }
        bfs_tree(&self.adjacency(), 0).iter().all(|p| p.is_some())
    }

    pub fn edge_index(&self, a: u32, b: u32) -> Option<usize> {
        self.edges.binary_search(&[a.min(b), a.max(b)]).ok()
    }

    /// Relabel vertices by `perm` (`v` becomes `perm[v]`).
    pub fn relabel(&self, perm: &[u32]) -> Result<Self> {
        Self::new(
            self.vertices,
            self.edges.iter().map(|&[a, b]| [perm[a as usize], perm[b as usize]]).collect(),
            self.triangles.iter().map(|t| t.map(|v| perm[v as usize])).collect(),
        )
    }
}

/// Parent of each vertex in the BFS tree from `base`, visiting neighbours in
/// ascending order; the base is its own parent, unreached vertices are `None`.
fn bfs_tree(adj: &[Vec<u32>], base: u32) -> Vec<Option<u32>> {
    let mut parent = vec![None; adj.len()];
    parent[base as usize] = Some(base);
    let mut queue = VecDeque::from([base]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v as usize] {
            if parent[w as usize].is_none() {
                parent[w as usize] = Some(v);
                queue.push_back(w);
            }
        }
    }
    parent
}

/// Vertices are elements, edges incident pairs, triangles chambers.
pub fn flag_complex(g: &IncidenceGeometry) -> Result<SimplicialComplex2> {
    if g.rank() != 3 {
        return Err(Error::Domain(format!("flag complex needs rank 3, got {}", g.rank())));
    }
    if !g.is_connected() {
        return Err(Error::Domain("geometry is not connected".into()));
    }
    let edges = g.pairs().into_iter().map(|(a, b)| [a, b]).collect();
    let triangles = g.chambers().into_iter().map(|c| [c[0], c[1], c[2]]).collect();
    SimplicialComplex2::new(g.len(), edges, triangles)
}

/// Edge-path group presentation together with the generator of each edge.
#[derive(Debug, Clone)]
pub struct EdgePathPresentation {
    pub presentation: Presentation,
    /// Generator index of each edge of the complex, `None` on tree edges.
    pub edge_generator: Vec<Option<usize>>,
}

/// Spanning tree by BFS from `base`; one generator per non-tree edge `a<b`
/// oriented `a -> b`; triangle `a<b<c` gives the word of `a -> b -> c -> a`.
pub fn pi1_presentation(c: &SimplicialComplex2, base: u32) -> Result<EdgePathPresentation> {
    if base as usize >= c.vertices {
        return Err(Error::Domain(format!("base vertex {base} out of range")));
    }
    let parent = bfs_tree(&c.adjacency(), base);
    if parent.iter().any(Option::is_none) {
        return Err(Error::Domain("complex is not connected".into()));
    }
    let mut edge_generator = Vec::with_capacity(c.edges.len());
    let mut names = Vec::new();
    for &[a, b] in &c.edges {
        let tree = parent[b as usize] == Some(a) && b != base || parent[a as usize] == Some(b) && a != base;
        if tree {
            edge_generator.push(None);
        } else {
            edge_generator.push(Some(names.len()));
            names.push(format!("e{a}_{b}"));
        }
    }
    let letter = |a: u32, b: u32| -> Option<i32> {
        let g = edge_generator[c.edge_index(a, b).expect("edge present")]?;
        Some(if a < b { gen_letter(g) } else { -gen_letter(g) })
    };
    let relators: Vec<Word> = c
        .triangles
        .iter()
        .map(|&[a, b, cc]| [letter(a, b), letter(b, cc), letter(cc, a)].into_iter().flatten().collect())
        .collect();
    Ok(EdgePathPresentation { presentation: Presentation::new(names, relators)?, edge_generator })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverReport {
    /// `None` when the enumeration exceeded the cap.
    pub pi1_order: Option<u64>,
    pub cap: usize,
}

impl CoverReport {
    pub fn sheets(&self) -> Option<u64> {
        self.pi1_order
    }

    pub fn simply_connected(&self) -> Option<bool> {
        self.pi1_order.map(|n| n == 1)
    }
}

/// Order of the fundamental group, Tietze reduction followed by coset
/// enumeration with at most `cap` live cosets.
pub fn sheets(c: &SimplicialComplex2, cap: usize) -> Result<CoverReport> {
    let p = pi1_presentation(c, 0)?;
    let reduced = fpgroup::tietze_reduce(&p.presentation);
    Ok(CoverReport { pi1_order: fpgroup::todd_coxeter(&reduced, cap).finite(), cap })
}

/// The universal cover built from the regular action of the fundamental
/// group, when it is finite within `cap`.
#[derive(Debug, Clone)]
pub struct FiniteCover {
    pub sheets: usize,
    pub complex: SimplicialComplex2,
}

impl FiniteCover {
    /// Vertex `(v, s)` of the cover has id `v * sheets + s`.
    pub fn project(&self, x: u32) -> u32 {
        x / self.sheets as u32
    }

    /// The projection restricted to the star of every vertex is a bijection
    /// onto the star of its image (neighbours and triangles alike).
    pub fn is_local_isomorphism(&self, base: &SimplicialComplex2) -> bool {
        let up = &self.complex;
        let adj_up = up.adjacency();
        let adj_down = base.adjacency();
        let mut tri_up = vec![Vec::new(); up.vertices];
        for t in &up.triangles {
            for &v in t {
                tri_up[v as usize].push(t.map(|x| self.project(x)));
            }
        }
        let mut tri_down = vec![Vec::new(); base.vertices];
        for t in &base.triangles {
            for &v in t {
                tri_down[v as usize].push(*t);
            }
        }
        (0..up.vertices).all(|x| {
            let v = self.project(x as u32) as usize;
            let mut n: Vec<u32> = adj_up[x].iter().map(|&y| self.project(y)).collect();
            n.sort_unstable();
            let mut t: Vec<[u32; 3]> = tri_up[x]
                .iter()
                .map(|t| {
                    let mut t = *t;
                    t.sort_unstable();
                    t
                })
                .collect();
            t.sort_unstable();
            n == adj_down[v] && t.windows(2).all(|w| w[0] != w[1]) && t == tri_down[v]
        })
    }
}

pub fn universal_cover(c: &SimplicialComplex2, cap: usize) -> Result<Option<FiniteCover>> {
    let p = pi1_presentation(c, 0)?;
    let red = fpgroup::tietze_reduce_tracked(&p.presentation);
    let Some(table) = fpgroup::coset_table(&red.presentation, cap) else { return Ok(None) };
    let t = table.order();
    let identity: Vec<u32> = (0..t as u32).collect();
    // right action: (s * a) * b = b[a[s]]
    let mul = |a: &Vec<u32>, b: &Vec<u32>| a.iter().map(|&s| b[s as usize]).collect::<Vec<u32>>();
    let inv = |a: &Vec<u32>| {
        let mut r = vec![0u32; a.len()];
        for (i, &x) in a.iter().enumerate() {
            r[x as usize] = i as u32;
        }
        r
    };
    let images = red.evaluate(&table.action, &identity, mul, inv);
    let sheet = |e: usize, s: u32| -> u32 {
        match p.edge_generator[e] {
            Some(g) => images[g][s as usize],
            None => s,
        }
    };
    let id = |v: u32, s: u32| v * t as u32 + s;
    let mut edges = Vec::with_capacity(c.edges.len() * t);
    for (e, &[a, b]) in c.edges.iter().enumerate() {
        for s in 0..t as u32 {
            edges.push([id(a, s), id(b, sheet(e, s))]);
        }
    }
    let mut triangles = Vec::with_capacity(c.triangles.len() * t);
    for &[a, b, cc] in &c.triangles {
        let eab = c.edge_index(a, b).expect("edge");
        let ebc = c.edge_index(b, cc).expect("edge");
        for s in 0..t as u32 {
            let sb = sheet(eab, s);
            triangles.push([id(a, s), id(b, sb), id(cc, sheet(ebc, sb))]);
        }
    }
    let complex = SimplicialComplex2::new(c.vertices * t, edges, triangles)?;
    Ok(Some(FiniteCover { sheets: t, complex }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Divisibility {
    True,
    False,
    Inconclusive,
}

/// Whether `t` divides `gcd(t1, t2)`; inconclusive if any order is unknown.
pub fn join_divisibility(t: &CoverReport, t1: &CoverReport, t2: &CoverReport) -> Divisibility {
    match (t.pi1_order, t1.pi1_order, t2.pi1_order) {
        (Some(t), Some(a), Some(b)) => {
            let g = gcd(a, b);
            if t != 0 && g.is_multiple_of(t) {
                Divisibility::True
            } else {
                Divisibility::False
            }
        }
        _ => Divisibility::Inconclusive,
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Number of vertices of each type in a flag complex, keyed by type.
pub fn vertex_type_counts(g: &IncidenceGeometry) -> BTreeMap<u8, usize> {
    g.type_set().iter().map(|&t| (t, g.count_of_type(t))).collect()
}
