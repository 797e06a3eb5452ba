//! Finitely presented groups: a text format, Tietze simplification and
//! Todd-Coxeter coset enumeration over the trivial subgroup.
//!
//! A letter is a nonzero `i32`: `g + 1` stands for generator `g` and
//! `-(g + 1)` for its inverse.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

pub type Letter = i32;
pub type Word = Vec<Letter>;

#[inline]
pub fn gen_letter(g: usize) -> Letter {
    g as Letter + 1
}

#[inline]
pub fn gen_of(l: Letter) -> usize {
    (l.unsigned_abs() - 1) as usize
}

/// Sort key placing `g` before `g^-1` before `g+1`.
#[inline]
fn letter_key(l: Letter) -> (usize, bool) {
    (gen_of(l), l < 0)
}

pub fn inverse_word(w: &[Letter]) -> Word {
    w.iter().rev().map(|&l| -l).collect()
}

pub fn free_reduce(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn cyclic_reduce(w: &[Letter]) -> Word {
    let w = free_reduce(w);
    let mut lo = 0;
    let mut hi = w.len();
    while hi - lo >= 2 && w[lo] == -w[hi - 1] {
        lo += 1;
        hi -= 1;
    }
    w[lo..hi].to_vec()
}

/// Least rotation of `w` or of its inverse under the letter order; two
/// cyclically reduced relators define the same normal closure element up to
/// conjugacy and inversion iff their canonical forms agree.
pub fn canonical_relator(w: &[Letter]) -> Word {
    let w = cyclic_reduce(w);
    let inv = inverse_word(&w);
    let mut best: Option<Word> = None;
    for base in [&w, &inv] {
        for s in 0..base.len() {
            let rot: Word = base[s..].iter().chain(&base[..s]).copied().collect();
            let better = match &best {
                None => true,
                Some(b) => rot.iter().map(|&l| letter_key(l)).lt(b.iter().map(|&l| letter_key(l))),
            };
            if better {
                best = Some(rot);
            }
        }
    }
    best.unwrap_or_default()
}

fn relator_order(a: &Word, b: &Word) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.iter().map(|&l| letter_key(l)).cmp(b.iter().map(|&l| letter_key(l))))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<String>,
    relators: Vec<Word>,
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Presentation {
    /// Relators are freely reduced; empty ones are dropped.
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for g in &generators {
            if !valid_name(g) {
                return Err(Error::Domain(format!("invalid generator name {g:?}")));
            }
            if !seen.insert(g.as_str()) {
                return Err(Error::Domain(format!("duplicate generator {g:?}")));
            }
        }
        let n = generators.len();
        let mut rels = Vec::with_capacity(relators.len());
        for r in relators {
            if r.iter().any(|&l| l == 0 || gen_of(l) >= n) {
                return Err(Error::Domain("relator uses an unknown generator".into()));
            }
            let r = free_reduce(&r);
            if !r.is_empty() {
                rels.push(r);
            }
        }
        Ok(Presentation { generators, relators: rels })
    }

    /// Generators named `x0, x1, ...`.
    pub fn anonymous(n: usize, relators: Vec<Word>) -> Result<Self> {
        Self::new((0..n).map(|i| format!("x{i}")).collect(), relators)
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Vec::len).sum()
    }

    /// Text format: `gen <name>` lines followed by `rel <letters>` lines,
    /// letters separated by spaces, inverses written `name^-1`. Lines starting
    /// with `#` are comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut generators = Vec::new();
        let mut index: BTreeMap<String, usize> = BTreeMap::new();
        let mut relators = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line_no = no + 1;
            let err = |msg: String| Error::Parse { line: line_no, msg };
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            match parts.next() {
                Some("gen") => {
                    let name = parts.next().ok_or_else(|| err("missing generator name".into()))?;
                    if parts.next().is_some() {
                        return Err(err("one generator per line".into()));
                    }
                    if !relators.is_empty() {
                        return Err(err("generators must precede relators".into()));
                    }
                    if !valid_name(name) {
                        return Err(err(format!("invalid generator name {name:?}")));
                    }
                    if index.insert(name.to_string(), generators.len()).is_some() {
                        return Err(err(format!("duplicate generator {name:?}")));
                    }
                    generators.push(name.to_string());
                }
                Some("rel") => {
                    let mut word = Vec::new();
                    for tok in parts {
                        let (name, inv) = match tok.strip_suffix("^-1") {
                            Some(base) => (base, true),
                            None => (tok, false),
                        };
                        let g = *index.get(name).ok_or_else(|| err(format!("unknown generator {name:?}")))?;
                        word.push(if inv { -gen_letter(g) } else { gen_letter(g) });
                    }
                    relators.push(word);
                }
                Some(other) => return Err(err(format!("unknown directive {other:?}"))),
                None => unreachable!(),
            }
        }
        Self::new(generators, relators)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for g in &self.generators {
            let _ = writeln!(out, "gen {g}");
        }
        for r in &self.relators {
            out.push_str("rel");
            for &l in r {
                let _ = write!(out, " {}", self.generators[gen_of(l)]);
                if l < 0 {
                    out.push_str("^-1");
                }
            }
            out.push('\n');
        }
        out
    }
}

/// How an input generator is expressed after reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Definition {
    /// Survives as the given generator of the reduced presentation.
    Kept(usize),
    /// Equal to a word in input generators eliminated later or kept.
    Word(Word),
}

#[derive(Debug, Clone)]
pub struct Reduction {
    pub presentation: Presentation,
    /// One entry per input generator.
    pub definitions: Vec<Definition>,
    /// Input generators in elimination order.
    elimination_order: Vec<usize>,
}

impl Reduction {
    /// Images of all input generators in some group, given images of the
    /// reduced generators.
    pub fn evaluate<T: Clone>(
        &self,
        reduced_images: &[T],
        identity: &T,
        mul: impl Fn(&T, &T) -> T,
        inv: impl Fn(&T) -> T,
    ) -> Vec<T> {
        let n = self.definitions.len();
        let mut images: Vec<Option<T>> = vec![None; n];
        for (g, d) in self.definitions.iter().enumerate() {
            if let Definition::Kept(k) = d {
                images[g] = Some(reduced_images[*k].clone());
            }
        }
        for &g in self.elimination_order.iter().rev() {
            let Definition::Word(w) = &self.definitions[g] else { unreachable!() };
            let mut acc = identity.clone();
            for &l in w {
                let x = images[gen_of(l)].as_ref().expect("definition order");
                acc = if l > 0 { mul(&acc, x) } else { mul(&acc, &inv(x)) };
            }
            images[g] = Some(acc);
        }
        images.into_iter().map(|x| x.expect("every generator defined")).collect()
    }
}

/// Relators longer than this are never used to eliminate a generator.
const MAX_ELIMINATION_LENGTH: usize = 24;

struct Reducer {
    relators: Vec<Option<Word>>,
    occurrences: Vec<BTreeSet<usize>>,
    alive: Vec<bool>,
    definitions: Vec<Option<Word>>,
    order: Vec<usize>,
}

impl Reducer {
    fn new(p: &Presentation) -> Self {
        let n = p.num_generators();
        let mut r = Reducer {
            relators: Vec::new(),
            occurrences: vec![BTreeSet::new(); n],
            alive: vec![true; n],
            definitions: vec![None; n],
            order: Vec::new(),
        };
        for w in &p.relators {
            r.push_relator(cyclic_reduce(w));
        }
        r
    }

    fn push_relator(&mut self, w: Word) {
        if w.is_empty() {
            return;
        }
        let idx = self.relators.len();
        for &l in &w {
            self.occurrences[gen_of(l)].insert(idx);
        }
        self.relators.push(Some(w));
    }

    fn remove_relator(&mut self, idx: usize) -> Word {
        let w = self.relators[idx].take().expect("live relator");
        for &l in &w {
            self.occurrences[gen_of(l)].remove(&idx);
        }
        w
    }

    /// Replace generator `g` by `def` everywhere.
    fn eliminate(&mut self, g: usize, def: Word) {
        let inv_def = inverse_word(&def);
        let touched: Vec<usize> = self.occurrences[g].iter().copied().collect();
        for idx in touched {
            let w = self.remove_relator(idx);
            let mut out = Vec::with_capacity(w.len() + def.len());
            for l in w {
                if gen_of(l) == g {
                    out.extend_from_slice(if l > 0 { &def } else { &inv_def });
                } else {
                    out.push(l);
                }
            }
            let out = cyclic_reduce(&out);
            if !out.is_empty() {
                // reuse the slot to keep relator indices stable
                for &l in &out {
                    self.occurrences[gen_of(l)].insert(idx);
                }
                self.relators[idx] = Some(out);
            }
        }
        self.alive[g] = false;
        self.definitions[g] = Some(def);
        self.order.push(g);
    }

    /// Length-1 and length-2 relators, resolved in one sweep with a signed
    /// union-find so that each generator maps to a surviving root or to 1.
    fn short_relator_pass(&mut self) -> bool {
        let n = self.alive.len();
        let trivial = n;
        let mut parent: Vec<usize> = (0..=n).collect();
        let mut sign: Vec<i8> = vec![1; n + 1];
        fn find(parent: &mut [usize], sign: &mut [i8], x: usize) -> (usize, i8) {
            let mut path = Vec::new();
            let mut r = x;
            while parent[r] != r {
                path.push(r);
                r = parent[r];
            }
            // compress, accumulating signs from the root downwards
            for &y in path.iter().rev() {
                let p = parent[y];
                if p != r {
                    sign[y] *= sign[p];
                }
                parent[y] = r;
            }
            (r, if x == r { 1 } else { sign[x] })
        }
        let mut changed = false;
        let mut consumed = Vec::new();
        let short: Vec<usize> =
            (0..self.relators.len()).filter(|&i| matches!(&self.relators[i], Some(w) if w.len() <= 2)).collect();
        for idx in short {
            let w = self.relators[idx].clone().expect("live");
            let (a, sa, b, sb) = match w.as_slice() {
                [x] => (gen_of(*x), if *x > 0 { 1 } else { -1 }, trivial, 1i8),
                // x^s y^t = 1 means x^s = y^-t
                [x, y] => (gen_of(*x), if *x > 0 { 1 } else { -1 }, gen_of(*y), if *y > 0 { -1 } else { 1 }),
                _ => unreachable!(),
            };
            if a == b {
                // a^2 or a^-2: a genuine relator, left in place
                continue;
            }
            // a^sa = b^sb
            let (ra, xa) = find(&mut parent, &mut sign, a);
            let (rb, xb) = find(&mut parent, &mut sign, b);
            // ra^(xa*sa) = rb^(xb*sb)
            if ra == rb {
                if ra == trivial || xa * sa == xb * sb {
                    consumed.push(idx);
                }
                continue;
            }
            let s = xa * sa * xb * sb;
            // ra = rb^s; the smaller index (or the identity) stays root
            let (child, root) = if rb == trivial || (ra != trivial && rb < ra) { (ra, rb) } else { (rb, ra) };
            parent[child] = root;
            sign[child] = s;
            consumed.push(idx);
            changed = true;
        }
        for idx in consumed {
            self.remove_relator(idx);
        }
        for g in 0..n {
            if !self.alive[g] {
                continue;
            }
            let (r, s) = find(&mut parent, &mut sign, g);
            if r == g {
                continue;
            }
            let def = if r == trivial { Vec::new() } else { vec![gen_letter(r) * s as Letter] };
            self.eliminate(g, def);
        }
        changed
    }

    /// Eliminate generators occurring exactly once in a short relator.
    fn elimination_pass(&mut self) -> bool {
        let mut candidates: Vec<usize> = (0..self.relators.len()).filter(|&i| self.relators[i].is_some()).collect();
        candidates.sort_by_key(|&i| (self.relators[i].as_ref().map_or(0, Vec::len), i));
        let mut changed = false;
        for idx in candidates {
            let Some(w) = &self.relators[idx] else { continue };
            if w.len() > MAX_ELIMINATION_LENGTH {
                continue;
            }
            let mut count: BTreeMap<usize, usize> = BTreeMap::new();
            for &l in w {
                *count.entry(gen_of(l)).or_default() += 1;
            }
            let Some(g) = count.iter().find(|&(_, &c)| c == 1).map(|(&g, _)| g) else { continue };
            let w = self.remove_relator(idx);
            let pos = w.iter().position(|&l| gen_of(l) == g).expect("occurs");
            // rotate to g^e * rest = 1, so g = rest^-1 or g^-1 = rest^-1
            let rest: Word = w[pos + 1..].iter().chain(&w[..pos]).copied().collect();
            let def = if w[pos] > 0 { inverse_word(&rest) } else { rest };
            self.eliminate(g, def);
            changed = true;
        }
        changed
    }

    fn dedupe(&mut self) {
        let mut seen = BTreeSet::new();
        for idx in 0..self.relators.len() {
            if let Some(w) = &self.relators[idx] {
                if !seen.insert(canonical_relator(w)) {
                    self.remove_relator(idx);
                }
            }
        }
    }

    fn finish(self, input: &Presentation) -> Reduction {
        let mut new_index = vec![usize::MAX; self.alive.len()];
        let mut names = Vec::new();
        for (g, &a) in self.alive.iter().enumerate() {
            if a {
                new_index[g] = names.len();
                names.push(input.generators[g].clone());
            }
        }
        let mut rels: Vec<Word> = self
            .relators
            .into_iter()
            .flatten()
            .map(|w| {
                canonical_relator(&w.iter().map(|&l| gen_letter(new_index[gen_of(l)]) * l.signum()).collect::<Word>())
            })
            .collect();
        rels.sort_by(relator_order);
        rels.dedup();
        let definitions = self
            .definitions
            .into_iter()
            .enumerate()
            .map(|(g, d)| match d {
                None => Definition::Kept(new_index[g]),
                Some(w) => Definition::Word(w),
            })
            .collect();
        Reduction {
            presentation: Presentation { generators: names, relators: rels },
            definitions,
            elimination_order: self.order,
        }
    }
}

/// Tietze reduction with a record of how each input generator is expressed.
pub fn tietze_reduce_tracked(p: &Presentation) -> Reduction {
    let mut r = Reducer::new(p);
    loop {
        let a = r.short_relator_pass();
        r.dedupe();
        let b = r.elimination_pass();
        r.dedupe();
        if !a && !b {
            break;
        }
    }
    r.finish(p)
}

/// Removes generators defined by short relators, substitutes, and drops
/// trivial and duplicate relators. Defines the same group.
pub fn tietze_reduce(p: &Presentation) -> Presentation {
    tietze_reduce_tracked(p).presentation
}

/// Result of a coset enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum GroupOrder {
    Finite(u64),
    Indeterminate,
}

impl GroupOrder {
    pub fn finite(self) -> Option<u64> {
        match self {
            GroupOrder::Finite(n) => Some(n),
            GroupOrder::Indeterminate => None,
        }
    }
}

const UNDEF: u32 = u32::MAX;

/// Closed coset table over the trivial subgroup: the regular action of each
/// generator, coset 0 being the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetTable {
    /// `action[g][c]` is the coset `c * g`.
    pub action: Vec<Vec<u32>>,
}

impl CosetTable {
    pub fn order(&self) -> usize {
        self.action.first().map_or(1, Vec::len)
    }
}

struct CapExceeded;

struct Enumerator {
    cols: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    live: usize,
    cap: usize,
    queue: Vec<u32>,
}

impl Enumerator {
    #[inline]
    fn get(&self, c: u32, x: usize) -> u32 {
        self.table[c as usize * self.cols + x]
    }

    #[inline]
    fn set(&mut self, c: u32, x: usize, v: u32) {
        self.table[c as usize * self.cols + x] = v;
    }

    fn n_cosets(&self) -> usize {
        self.parent.len()
    }

    fn define(&mut self, c: u32, x: usize) -> std::result::Result<(), CapExceeded> {
        if self.live >= self.cap {
            return Err(CapExceeded);
        }
        let d = self.n_cosets() as u32;
        self.table.extend(std::iter::repeat_n(UNDEF, self.cols));
        self.parent.push(d);
        self.live += 1;
        self.set(c, x, d);
        self.set(d, x ^ 1, c);
        Ok(())
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut x = c;
        while self.parent[x as usize] != r {
            let next = self.parent[x as usize];
            self.parent[x as usize] = r;
            x = next;
        }
        r
    }

    fn merge(&mut self, a: u32, b: u32) {
        let a = self.rep(a);
        let b = self.rep(b);
        if a == b {
            return;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        self.parent[hi as usize] = lo;
        self.live -= 1;
        self.queue.push(hi);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let e = self.queue[i];
            i += 1;
            for x in 0..self.cols {
                let f = self.get(e, x);
                if f == UNDEF {
                    continue;
                }
                self.set(f, x ^ 1, UNDEF);
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                let ex = self.get(e1, x);
                if ex != UNDEF {
                    self.merge(f1, ex);
                } else {
                    let fx = self.get(f1, x ^ 1);
                    if fx != UNDEF {
                        self.merge(e1, fx);
                    } else {
                        self.set(e1, x, f1);
                        self.set(f1, x ^ 1, e1);
                    }
                }
            }
        }
        self.queue.clear();
    }

    /// Scan relator `w` (column indices) from coset `c`, defining cosets to
    /// complete the scan.
    fn scan_and_fill(&mut self, c: u32, w: &[usize]) -> std::result::Result<(), CapExceeded> {
        let mut f = c;
        let mut b = c;
        let mut i = 0usize;
        let mut j = w.len();
        loop {
            while i < j && self.get(f, w[i]) != UNDEF {
                f = self.get(f, w[i]);
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i && self.get(b, w[j - 1] ^ 1) != UNDEF {
                b = self.get(b, w[j - 1] ^ 1);
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                self.set(f, w[i], b);
                self.set(b, w[i] ^ 1, f);
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }

    /// Renumber live cosets in increasing order; returns the new number of
    /// the first live coset at or after `from`.
    fn compact(&mut self, from: u32) -> u32 {
        let n = self.n_cosets();
        let mut new_num = vec![UNDEF; n];
        let mut next = 0u32;
        for (c, slot) in new_num.iter_mut().enumerate() {
            if self.parent[c] == c as u32 {
                *slot = next;
                next += 1;
            }
        }
        let mut table = Vec::with_capacity(next as usize * self.cols);
        for (c, &num) in new_num.iter().enumerate() {
            if num != UNDEF {
                for x in 0..self.cols {
                    let v = self.table[c * self.cols + x];
                    table.push(if v == UNDEF { UNDEF } else { new_num[v as usize] });
                }
            }
        }
        self.table = table;
        self.parent = (0..next).collect();
        (from as usize..n).find(|&c| new_num[c] != UNDEF).map_or(next, |c| new_num[c])
    }
}

fn enumerate(p: &Presentation, cap: usize) -> Option<CosetTable> {
    let ngens = p.num_generators();
    let cols = 2 * ngens;
    let col = |l: Letter| 2 * gen_of(l) + usize::from(l < 0);
    let rels: Vec<Vec<usize>> = p.relators.iter().map(|r| r.iter().map(|&l| col(l)).collect()).collect();
    if cap == 0 {
        return None;
    }
    let mut e = Enumerator { cols, table: vec![UNDEF; cols], parent: vec![0], live: 1, cap, queue: Vec::new() };
    let mut c = 0u32;
    let run = (|| -> std::result::Result<(), CapExceeded> {
        while (c as usize) < e.n_cosets() {
            if e.parent[c as usize] == c {
                for w in &rels {
                    e.scan_and_fill(c, w)?;
                    if e.parent[c as usize] != c {
                        break;
                    }
                }
                for x in 0..cols {
                    if e.parent[c as usize] != c {
                        break;
                    }
                    if e.get(c, x) == UNDEF {
                        e.define(c, x)?;
                    }
                }
            }
            c += 1;
            // order-preserving renumbering leaves the run unchanged
            if e.n_cosets() > 1024 && e.n_cosets() > 2 * e.live {
                c = e.compact(c);
            }
        }
        Ok(())
    })();
    run.ok()?;
    e.compact(0);
    let n = e.n_cosets();
    let action = (0..ngens).map(|g| (0..n as u32).map(|c| e.get(c, 2 * g)).collect()).collect();
    Some(CosetTable { action })
}

/// Order of the group by HLT enumeration over the trivial subgroup, or
/// `Indeterminate` if more than `cap` live cosets would be needed.
pub fn todd_coxeter(p: &Presentation, cap: usize) -> GroupOrder {
    match enumerate(p, cap) {
        Some(t) => GroupOrder::Finite(t.order() as u64),
        None => GroupOrder::Indeterminate,
    }
}

/// Full coset table, when the enumeration closes within `cap`.
pub fn coset_table(p: &Presentation, cap: usize) -> Option<CosetTable> {
    enumerate(p, cap)
}
