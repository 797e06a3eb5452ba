//! Projective spaces `PG(n,q)` over GF(2^k), the parabolic quadric `Q(6,q)`,
//! the symplectic form on `PG(5,q)`, Grassmann coordinates of lines, and the
//! projection of `Q(6,q)` from its nucleus onto `W(5,q)`.
//!
//! Vectors are plain slices of [`FieldElement`]. Subspaces are stored by their
//! reduced row echelon basis, so two subspaces are equal exactly when their
//! representations are.

use std::cmp::Ordering;

use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{Error, Result};
use crate::finfield::{FieldElement, FiniteField};

/// Default cap on the number of objects any enumeration may produce.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 5_000_000;

pub type Vector = Vec<FieldElement>;

/// A point of `PG(n,q)`: nonzero vector scaled so that its first nonzero
/// coordinate is one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
#[serde(transparent)]
pub struct ProjPoint {
    coords: Vector,
}

impl ProjPoint {
    pub fn new(field: &FiniteField, coords: Vector) -> Result<Self> {
        let mut coords = coords;
        match coords.iter().position(|c| !c.is_zero()) {
            None => Err(Error::Domain("zero vector is not a projective point".into())),
            Some(lead) => {
                let s = field.inv_nonzero(coords[lead]);
                for c in coords.iter_mut() {
                    *c = field.mul(*c, s);
                }
                Ok(ProjPoint { coords })
            }
        }
    }

    /// Build from bit values, e.g. `&[1, 0, 0, 1, 0, 0, 0]`.
    pub fn from_bits(field: &FiniteField, bits: &[u8]) -> Result<Self> {
        let coords = bits.iter().map(|&b| field.element(b)).collect::<Result<Vector>>()?;
        Self::new(field, coords)
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    /// Vector length `n + 1`.
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn bits(&self) -> Vec<u8> {
        self.coords.iter().map(|c| c.0).collect()
    }
}

/// Number of points of `PG(n,q)`.
pub fn point_count(n: usize, q: u64) -> u64 {
    (0..=n as u32).map(|i| q.pow(i)).sum()
}

/// Gaussian binomial coefficient: the number of `k`-dimensional vector
/// subspaces of an `n`-dimensional space over GF(q).
pub fn gaussian_binomial(n: u32, k: u32, q: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= (q as u128).pow(n - i) - 1;
        den *= (q as u128).pow(i + 1) - 1;
    }
    (num / den) as u64
}

/// Index of a canonical point in the lexicographic list of points of
/// `PG(n,q)` produced by [`enumerate_points`].
pub fn point_index(q: usize, coords: &[FieldElement]) -> usize {
    let len = coords.len();
    let lead = coords.iter().position(|c| !c.is_zero()).expect("canonical point is nonzero");
    // points whose leading coordinate comes later sort first
    let mut before = 0usize;
    for j in (lead + 1)..len {
        before += q.pow((len - 1 - j) as u32);
    }
    let mut tail = 0usize;
    for c in &coords[lead + 1..] {
        tail = tail * q + c.0 as usize;
    }
    before + tail
}

/// All points of `PG(n,q)` in lexicographic order of canonical coordinates.
pub fn enumerate_points(n: usize, field: &FiniteField, budget: u64) -> Result<Vec<ProjPoint>> {
    let q = field.order();
    let count = point_count(n, q as u64);
    if count > budget {
        return Err(Error::Resource(format!("PG({n},{q}) has {count} points, budget is {budget}")));
    }
    let len = n + 1;
    let mut out = Vec::with_capacity(count as usize);
    for lead in (0..len).rev() {
        let free = len - 1 - lead;
        for tail in 0..q.pow(free as u32) {
            let mut coords = vec![FieldElement::ZERO; len];
            coords[lead] = FieldElement::ONE;
            let mut t = tail;
            for j in (lead + 1..len).rev() {
                coords[j] = FieldElement((t % q) as u8);
                t /= q;
            }
            out.push(ProjPoint { coords });
        }
    }
    debug_assert!(out.windows(2).all(|w| w[0] < w[1]));
    Ok(out)
}

/// Reduced row echelon form; zero rows are dropped.
pub fn rref(field: &FiniteField, rows: &[Vector]) -> Vec<Vector> {
    let mut m: Vec<Vector> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let s = field.inv_nonzero(m[rank][col]);
        for c in m[rank].iter_mut() {
            *c = field.mul(*c, s);
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let f = row[col];
                for (c, p) in row.iter_mut().zip(&pivot_row) {
                    *c = field.add(*c, field.mul(f, *p));
                }
            }
        }
        rank += 1;
    }
    m.truncate(rank);
    m
}

/// A projective subspace, represented by its unique reduced echelon basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Vector>,
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.ambient, self.rows.len(), &self.rows).cmp(&(other.ambient, other.rows.len(), &other.rows))
    }
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows.len()))?;
        for r in &self.rows {
            seq.serialize_element(&r.iter().map(|c| c.0).collect::<Vec<u8>>())?;
        }
        seq.end()
    }
}

impl Subspace {
    /// Span of arbitrary vectors of length `ambient`.
    pub fn from_rows(field: &FiniteField, ambient: usize, rows: &[Vector]) -> Result<Self> {
        if rows.iter().any(|r| r.len() != ambient) {
            return Err(Error::Domain("vectors of mixed length".into()));
        }
        Ok(Subspace { ambient, rows: rref(field, rows) })
    }

    pub fn span(field: &FiniteField, points: &[ProjPoint]) -> Result<Self> {
        let ambient = points.first().ok_or_else(|| Error::Domain("span of no points".into()))?.len();
        let rows: Vec<Vector> = points.iter().map(|p| p.coords.clone()).collect();
        Self::from_rows(field, ambient, &rows)
    }

    pub fn empty(ambient: usize) -> Self {
        Subspace { ambient, rows: Vec::new() }
    }

    pub fn whole(field: &FiniteField, ambient: usize) -> Self {
        let rows: Vec<Vector> = (0..ambient)
            .map(|i| {
                let mut v = vec![FieldElement::ZERO; ambient];
                v[i] = FieldElement::ONE;
                v
            })
            .collect();
        Self::from_rows(field, ambient, &rows).expect("identity rows")
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Vector-space rank.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Projective dimension (`rank - 1`, so `-1` for the empty subspace).
    pub fn dim(&self) -> isize {
        self.rows.len() as isize - 1
    }

    pub fn contains_vector(&self, field: &FiniteField, v: &[FieldElement]) -> bool {
        // reduce v against the echelon basis
        let mut v = v.to_vec();
        for row in &self.rows {
            let lead = row.iter().position(|c| !c.is_zero()).expect("echelon row");
            if !v[lead].is_zero() {
                let f = v[lead];
                for (c, r) in v.iter_mut().zip(row) {
                    *c = field.add(*c, field.mul(f, *r));
                }
            }
        }
        v.iter().all(|c| c.is_zero())
    }

    pub fn contains_point(&self, field: &FiniteField, p: &ProjPoint) -> bool {
        self.contains_vector(field, p.coords())
    }

    pub fn contains(&self, field: &FiniteField, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains_vector(field, r))
    }

    pub fn join(&self, field: &FiniteField, other: &Subspace) -> Subspace {
        let rows: Vec<Vector> = self.rows.iter().chain(&other.rows).cloned().collect();
        Subspace { ambient: self.ambient, rows: rref(field, &rows) }
    }

    /// All points, in lexicographic order.
    pub fn points(&self, field: &FiniteField) -> Vec<ProjPoint> {
        let q = field.order();
        let r = self.rows.len();
        let mut out = Vec::new();
        for combo in 1..q.pow(r as u32) {
            let mut v = vec![FieldElement::ZERO; self.ambient];
            let mut t = combo;
            for row in &self.rows {
                let c = FieldElement((t % q) as u8);
                t /= q;
                if !c.is_zero() {
                    for (x, y) in v.iter_mut().zip(row) {
                        *x = field.add(*x, field.mul(c, *y));
                    }
                }
            }
            if let Ok(p) = ProjPoint::new(field, v) {
                out.push(p);
            }
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn intersection(&self, field: &FiniteField, other: &Subspace) -> Subspace {
        // points common to both; fine for the small spaces used here
        let common: Vec<Vector> =
            self.points(field).into_iter().filter(|p| other.contains_point(field, p)).map(|p| p.coords).collect();
        Subspace { ambient: self.ambient, rows: rref(field, &common) }
    }

    /// The subspace viewed as a projective point (rank one only).
    pub fn as_point(&self) -> Option<ProjPoint> {
        (self.rows.len() == 1).then(|| ProjPoint { coords: self.rows[0].clone() })
    }
}

/// All projective `d`-subspaces of `PG(n,q)`, sorted in the canonical order.
pub fn enumerate_subspaces(d: usize, n: usize, field: &FiniteField, budget: u64) -> Result<Vec<Subspace>> {
    let q = field.order();
    let len = n + 1;
    let rank = d + 1;
    if rank > len {
        return Ok(Vec::new());
    }
    let count = gaussian_binomial(len as u32, rank as u32, q as u64);
    if count > budget {
        return Err(Error::Resource(format!("PG({n},{q}) has {count} subspaces of dimension {d}, budget is {budget}")));
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut pivots: Vec<usize> = (0..rank).collect();
    loop {
        // free positions: in row i, columns after pivot i that are not pivots
        let free: Vec<(usize, usize)> = (0..rank)
            .flat_map(|i| {
                let piv = &pivots;
                (piv[i] + 1..len).filter(move |c| !piv.contains(c)).map(move |c| (i, c))
            })
            .collect();
        for fill in 0..q.pow(free.len() as u32) {
            let mut rows = vec![vec![FieldElement::ZERO; len]; rank];
            for (i, &p) in pivots.iter().enumerate() {
                rows[i][p] = FieldElement::ONE;
            }
            let mut t = fill;
            for &(i, c) in &free {
                rows[i][c] = FieldElement((t % q) as u8);
                t /= q;
            }
            out.push(Subspace { ambient: len, rows });
        }
        // next combination of pivot columns
        let mut i = rank;
        loop {
            if i == 0 {
                out.sort();
                debug_assert_eq!(out.len() as u64, count);
                return Ok(out);
            }
            i -= 1;
            if pivots[i] < len - rank + i {
                pivots[i] += 1;
                for j in i + 1..rank {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Q(6,q): X0X4 + X1X5 + X2X6 = X3^2

pub const NUCLEUS_BITS: [u8; 7] = [0, 0, 0, 1, 0, 0, 0];

fn expect_len(x: &[FieldElement], n: usize) -> Result<()> {
    if x.len() == n {
        Ok(())
    } else {
        Err(Error::Domain(format!("expected {n} coordinates, got {}", x.len())))
    }
}

/// `q(x) = x0x4 + x1x5 + x2x6 + x3^2`.
pub fn quadric_eval(field: &FiniteField, x: &[FieldElement]) -> Result<FieldElement> {
    expect_len(x, 7)?;
    let m = |a: usize, b: usize| field.mul(x[a], x[b]);
    Ok(field.add(field.add(m(0, 4), m(1, 5)), field.add(m(2, 6), m(3, 3))))
}

/// Polar form of the quadric; `x3` drops out in characteristic two.
pub fn polar_form(field: &FiniteField, x: &[FieldElement], y: &[FieldElement]) -> Result<FieldElement> {
    expect_len(x, 7)?;
    expect_len(y, 7)?;
    let mut acc = FieldElement::ZERO;
    for (a, b) in [(0, 4), (1, 5), (2, 6)] {
        acc = field.add(acc, field.mul(x[a], y[b]));
        acc = field.add(acc, field.mul(x[b], y[a]));
    }
    Ok(acc)
}

pub fn on_quadric(field: &FiniteField, p: &ProjPoint) -> bool {
    quadric_eval(field, p.coords()).map(|v| v.is_zero()).unwrap_or(false)
}

/// True iff every point of the line lies on `Q(6,q)`.
pub fn line_on_quadric(field: &FiniteField, l: &Subspace) -> Result<bool> {
    if l.rank() != 2 || l.ambient() != 7 {
        return Err(Error::Domain("expected a line of PG(6,q)".into()));
    }
    let (a, b) = (&l.rows()[0], &l.rows()[1]);
    Ok(quadric_eval(field, a)?.is_zero() && quadric_eval(field, b)?.is_zero() && polar_form(field, a, b)?.is_zero())
}

/// Project a point of `Q(6,q)` from the nucleus onto `X3 = 0`, giving
/// coordinates `(X0,X1,X2,X4,X5,X6)`.
pub fn project_from_nucleus(field: &FiniteField, x: &ProjPoint) -> Result<ProjPoint> {
    expect_len(x.coords(), 7)?;
    if x.bits() == NUCLEUS_BITS {
        return Err(Error::Domain("cannot project the nucleus".into()));
    }
    if !on_quadric(field, x) {
        return Err(Error::Domain("point is not on Q(6,q)".into()));
    }
    let c = x.coords();
    ProjPoint::new(field, vec![c[0], c[1], c[2], c[4], c[5], c[6]])
}

/// Inverse of [`project_from_nucleus`]: `X3 = sqrt(y0y3 + y1y4 + y2y5)`.
pub fn lift_to_quadric(field: &FiniteField, y: &ProjPoint) -> Result<ProjPoint> {
    expect_len(y.coords(), 6)?;
    let c = y.coords();
    let s = field.add(field.add(field.mul(c[0], c[3]), field.mul(c[1], c[4])), field.mul(c[2], c[5]));
    ProjPoint::new(field, vec![c[0], c[1], c[2], field.sqrt(s), c[3], c[4], c[5]])
}

/// Lift a subspace of `PG(5,q)` spanned by projected quadric points back into
/// `PG(6,q)` (the lift of a spanning set spans the preimage for singular
/// subspaces).
pub fn lift_subspace(field: &FiniteField, s: &Subspace) -> Result<Subspace> {
    let pts: Vec<ProjPoint> = s
        .rows()
        .iter()
        .map(|r| ProjPoint::new(field, r.clone()).and_then(|p| lift_to_quadric(field, &p)))
        .collect::<Result<_>>()?;
    Subspace::span(field, &pts)
}

// ---------------------------------------------------------------------------
// W(5,q)

/// `PG(5,q)` with the alternating form
/// `B(x,y) = x0y3 + x3y0 + x1y4 + x4y1 + x2y5 + x5y2`,
/// which is the polar form of `Q(6,q)` with `X3` deleted.
#[derive(Debug, Clone)]
pub struct SymplecticSpace {
    field: FiniteField,
    form_matrix: [[FieldElement; 6]; 6],
}

impl SymplecticSpace {
    pub fn new(field: &FiniteField) -> Self {
        let mut m = [[FieldElement::ZERO; 6]; 6];
        for (a, b) in [(0, 3), (1, 4), (2, 5)] {
            m[a][b] = FieldElement::ONE;
            m[b][a] = FieldElement::ONE;
        }
        SymplecticSpace { field: field.clone(), form_matrix: m }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn form_matrix(&self) -> &[[FieldElement; 6]; 6] {
        &self.form_matrix
    }

    pub fn form(&self, x: &[FieldElement], y: &[FieldElement]) -> FieldElement {
        let f = &self.field;
        let mut acc = FieldElement::ZERO;
        for (a, b) in [(0, 3), (1, 4), (2, 5)] {
            acc = f.add(acc, f.mul(x[a], y[b]));
            acc = f.add(acc, f.mul(x[b], y[a]));
        }
        acc
    }

    /// The polar subspace `{y : B(s,y) = 0 for all s in S}`.
    pub fn perp(&self, s: &Subspace) -> Subspace {
        let f = &self.field;
        // rows of S·J, then the null space of that matrix
        let constraints: Vec<Vector> = s
            .rows()
            .iter()
            .map(|r| {
                (0..6)
                    .map(|j| (0..6).fold(FieldElement::ZERO, |acc, i| f.add(acc, f.mul(r[i], self.form_matrix[i][j]))))
                    .collect()
            })
            .collect();
        null_space(f, 6, &constraints)
    }

    pub fn is_totally_isotropic(&self, s: &Subspace) -> bool {
        let rows = s.rows();
        rows.iter().enumerate().all(|(i, a)| rows[i + 1..].iter().all(|b| self.form(a, b).is_zero()))
    }

    /// Radical of the form restricted to `s`.
    pub fn radical(&self, s: &Subspace) -> Subspace {
        let p = self.perp(s);
        s.intersection(&self.field, &p)
    }
}

/// Null space `{y : M y = 0}` of the matrix with the given rows.
pub fn null_space(field: &FiniteField, ambient: usize, rows: &[Vector]) -> Subspace {
    let m = rref(field, rows);
    let pivots: Vec<usize> = m.iter().map(|r| r.iter().position(|c| !c.is_zero()).expect("echelon row")).collect();
    let mut basis = Vec::new();
    for free in (0..ambient).filter(|c| !pivots.contains(c)) {
        let mut v = vec![FieldElement::ZERO; ambient];
        v[free] = FieldElement::ONE;
        for (r, &p) in m.iter().zip(&pivots) {
            // characteristic 2: -x = x
            v[p] = r[free];
        }
        basis.push(v);
    }
    Subspace { ambient, rows: rref(field, &basis) }
}

// ---------------------------------------------------------------------------
// Grassmann coordinates

/// Plücker coordinates `p_ij`, `0 <= i < j <= 6`, of a line of `PG(6,q)`,
/// scaled so that the first nonzero coordinate is one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize)]
pub struct GrassCoords {
    p: Vec<FieldElement>,
}

/// Position of `p_ij` (with `i < j`) among the 21 coordinates.
pub fn grass_index(i: usize, j: usize) -> usize {
    assert!(i < j && j < 7);
    (0..i).map(|r| 6 - r).sum::<usize>() + (j - i - 1)
}

impl GrassCoords {
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        match i.cmp(&j) {
            Ordering::Less => self.p[grass_index(i, j)],
            Ordering::Greater => self.p[grass_index(j, i)],
            Ordering::Equal => FieldElement::ZERO,
        }
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.p
    }
}

/// `p_ij = a_i b_j + a_j b_i` from any spanning pair, canonicalized.
pub fn grassmann_from_pair(field: &FiniteField, a: &[FieldElement], b: &[FieldElement]) -> Result<GrassCoords> {
    let n = a.len();
    let mut p = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            p.push(field.add(field.mul(a[i], b[j]), field.mul(a[j], b[i])));
        }
    }
    let lead = p
        .iter()
        .position(|c| !c.is_zero())
        .ok_or_else(|| Error::Domain("dependent pair does not span a line".into()))?;
    let s = field.inv_nonzero(p[lead]);
    for c in p.iter_mut() {
        *c = field.mul(*c, s);
    }
    Ok(GrassCoords { p })
}

pub fn grassmann(field: &FiniteField, l: &Subspace) -> Result<GrassCoords> {
    if l.rank() != 2 || l.ambient() != 7 {
        return Err(Error::Domain("expected a line of PG(6,q)".into()));
    }
    grassmann_from_pair(field, &l.rows()[0], &l.rows()[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(k: u32) -> FiniteField {
        FiniteField::new(k).unwrap()
    }

    fn brute_points(n: usize, field: &FiniteField) -> usize {
        // count nonzero vectors whose first nonzero coordinate is 1
        let q = field.order();
        (1..q.pow(n as u32 + 1))
            .filter(|&v| {
                let mut digits = Vec::new();
                let mut t = v;
                for _ in 0..=n {
                    digits.push(t % q);
                    t /= q;
                }
                digits.reverse();
                digits.iter().find(|&&d| d != 0) == Some(&1)
            })
            .count()
    }

    #[test]
    fn point_counts() {
        for (n, k, expect) in [(5, 1, 63), (2, 1, 7), (5, 2, 1365)] {
            let f = gf(k);
            let pts = enumerate_points(n, &f, DEFAULT_ENUMERATION_BUDGET).unwrap();
            assert_eq!(pts.len(), expect);
            assert_eq!(brute_points(n, &f), expect);
            for (i, p) in pts.iter().enumerate() {
                assert_eq!(point_index(f.order(), p.coords()), i);
            }
        }
        assert!(matches!(enumerate_points(5, &gf(1), 10), Err(Error::Resource(_))));
    }

    #[test]
    fn subspace_counts_match_gaussian_binomials() {
        let f = gf(1);
        let lines = enumerate_subspaces(1, 5, &f, DEFAULT_ENUMERATION_BUDGET).unwrap();
        let planes = enumerate_subspaces(2, 5, &f, DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert_eq!(lines.len(), 651);
        assert_eq!(planes.len(), 1395);
        // oracle: count distinct spans of point pairs
        let pts = enumerate_points(5, &f, 100).unwrap();
        let mut spans = std::collections::BTreeSet::new();
        for a in &pts {
            for b in &pts {
                if a < b {
                    spans.insert(Subspace::span(&f, &[a.clone(), b.clone()]).unwrap());
                }
            }
        }
        assert_eq!(spans.len(), 651);
        assert!(spans.iter().eq(lines.iter()));
        assert!(lines.windows(2).all(|w| w[0] < w[1]));
        assert!(planes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn span_of_one_point() {
        let f = gf(2);
        let p = ProjPoint::from_bits(&f, &[0, 2, 3, 0, 0, 1]).unwrap();
        let s = Subspace::span(&f, std::slice::from_ref(&p)).unwrap();
        assert_eq!(s.dim(), 0);
        assert_eq!(s.as_point().unwrap(), p);
    }

    #[test]
    fn quadric_examples() {
        let f = gf(1);
        let e0 = ProjPoint::from_bits(&f, &[1, 0, 0, 0, 0, 0, 0]).unwrap();
        assert!(quadric_eval(&f, e0.coords()).unwrap().is_zero());
        let x = ProjPoint::from_bits(&f, &[1, 0, 0, 1, 0, 0, 0]).unwrap();
        assert_eq!(quadric_eval(&f, x.coords()).unwrap(), FieldElement::ONE);
        assert!(quadric_eval(&f, &x.coords()[..6]).is_err());
        let pts = enumerate_points(6, &f, 1000).unwrap();
        assert_eq!(pts.len(), 127);
        assert_eq!(pts.iter().filter(|p| on_quadric(&f, p)).count(), 63);
    }

    #[test]
    fn polar_identity() {
        let f = gf(2);
        let pts = enumerate_points(6, &f, 10_000).unwrap();
        for a in pts.iter().step_by(37) {
            for b in pts.iter().step_by(53) {
                let s: Vector = a.coords().iter().zip(b.coords()).map(|(x, y)| f.add(*x, *y)).collect();
                let lhs = quadric_eval(&f, &s).unwrap();
                let rhs = f.add(
                    f.add(quadric_eval(&f, a.coords()).unwrap(), quadric_eval(&f, b.coords()).unwrap()),
                    polar_form(&f, a.coords(), b.coords()).unwrap(),
                );
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn lines_on_quadric() {
        let f = gf(1);
        let p = |b: &[u8]| ProjPoint::from_bits(&f, b).unwrap();
        let l = Subspace::span(&f, &[p(&[1, 0, 0, 0, 0, 0, 0]), p(&[0, 1, 0, 0, 0, 0, 0])]).unwrap();
        assert!(line_on_quadric(&f, &l).unwrap());
        let m = Subspace::span(&f, &[p(&[1, 0, 0, 0, 0, 0, 0]), p(&[0, 0, 0, 0, 1, 0, 0])]).unwrap();
        assert!(!line_on_quadric(&f, &m).unwrap());
        let off = Subspace::span(&f, &[p(&[1, 0, 0, 1, 0, 0, 0]), p(&[0, 1, 0, 0, 0, 0, 0])]).unwrap();
        assert!(!line_on_quadric(&f, &off).unwrap());
    }

    #[test]
    fn nucleus_projection() {
        let f = gf(1);
        let e0 = ProjPoint::from_bits(&f, &[1, 0, 0, 0, 0, 0, 0]).unwrap();
        assert_eq!(project_from_nucleus(&f, &e0).unwrap().bits(), vec![1, 0, 0, 0, 0, 0]);
        let y = ProjPoint::from_bits(&f, &[1, 0, 0, 1, 0, 0]).unwrap();
        assert_eq!(lift_to_quadric(&f, &y).unwrap().bits(), vec![1, 0, 0, 1, 1, 0, 0]);
        let nucleus = ProjPoint::from_bits(&f, &NUCLEUS_BITS).unwrap();
        assert!(matches!(project_from_nucleus(&f, &nucleus), Err(Error::Domain(_))));
        for k in [1, 2] {
            let f = gf(k);
            let q6: Vec<_> =
                enumerate_points(6, &f, 100_000).unwrap().into_iter().filter(|p| on_quadric(&f, p)).collect();
            let w5 = enumerate_points(5, &f, 100_000).unwrap();
            assert_eq!(q6.len(), w5.len());
            let mut images = std::collections::BTreeSet::new();
            for x in &q6 {
                let y = project_from_nucleus(&f, x).unwrap();
                assert_eq!(&lift_to_quadric(&f, &y).unwrap(), x);
                images.insert(y);
            }
            assert_eq!(images.len(), w5.len());
        }
    }

    #[test]
    fn symplectic_basics() {
        let f = gf(1);
        let w = SymplecticSpace::new(&f);
        let pts = enumerate_points(5, &f, 100).unwrap();
        for p in &pts {
            assert!(w.form(p.coords(), p.coords()).is_zero());
        }
        let lines = enumerate_subspaces(1, 5, &f, 10_000).unwrap();
        let ti = lines.iter().filter(|l| w.is_totally_isotropic(l)).count();
        assert_eq!(ti, 315);
        assert_eq!(ti, 15 * 63 / 3);
        for s in lines.iter().step_by(7) {
            let p = w.perp(s);
            assert_eq!(s.dim() + p.dim(), 4);
            assert_eq!(&w.perp(&p), s);
        }
        let whole = Subspace::whole(&f, 6);
        assert_eq!(w.perp(&whole).dim(), -1);
    }

    #[test]
    fn projected_quadric_lines_are_isotropic() {
        let f = gf(1);
        let w = SymplecticSpace::new(&f);
        let lines = enumerate_subspaces(1, 6, &f, 10_000).unwrap();
        let nucleus = ProjPoint::from_bits(&f, &NUCLEUS_BITS).unwrap();
        let mut n = 0;
        for l in lines.iter().filter(|l| line_on_quadric(&f, l).unwrap()) {
            assert!(!l.contains_point(&f, &nucleus));
            let pts: Vec<_> = l.points(&f).iter().map(|x| project_from_nucleus(&f, x).unwrap()).collect();
            let img = Subspace::span(&f, &pts).unwrap();
            assert_eq!(img.rank(), 2);
            assert!(w.is_totally_isotropic(&img));
            n += 1;
        }
        assert_eq!(n, 315);
    }

    #[test]
    fn grassmann_coordinates() {
        let f = gf(1);
        let p = |b: &[u8]| ProjPoint::from_bits(&f, b).unwrap();
        let l = Subspace::span(&f, &[p(&[1, 0, 0, 0, 0, 0, 0]), p(&[0, 1, 0, 0, 0, 0, 0])]).unwrap();
        let g = grassmann(&f, &l).unwrap();
        assert_eq!(g.get(0, 1), FieldElement::ONE);
        assert_eq!(g.coords().iter().filter(|c| !c.is_zero()).count(), 1);
        assert_eq!(grass_index(5, 6), 20);

        for k in [1, 2] {
            let f = gf(k);
            let lines = enumerate_subspaces(1, 6, &f, 10_000_000).unwrap();
            for l in lines.iter().step_by(if k == 1 { 1 } else { 97 }) {
                let a = &l.rows()[0];
                let b = &l.rows()[1];
                let ab: Vector = a.iter().zip(b).map(|(x, y)| f.add(*x, *y)).collect();
                let g = grassmann(&f, l).unwrap();
                assert_eq!(g, grassmann_from_pair(&f, a, &ab).unwrap());
                assert_eq!(g, grassmann_from_pair(&f, b, a).unwrap());
                // Plücker relations p_ij p_kl - p_ik p_jl + p_il p_jk = 0
                for i in 0..7 {
                    for j in i + 1..7 {
                        for kk in j + 1..7 {
                            for m in kk + 1..7 {
                                let t = |x, y| g.get(x, y);
                                let r = f.add(
                                    f.add(f.mul(t(i, j), t(kk, m)), f.mul(t(i, kk), t(j, m))),
                                    f.mul(t(i, m), t(j, kk)),
                                );
                                assert!(r.is_zero());
                            }
                        }
                    }
                }
            }
        }
    }
}
