//! Equivalence deciders: unimodular fan equivalence, simplicial complex
//! isomorphism, bounded graded-ring isomorphism search, characteristic-class
//! preservation, and the family classification driver.
//!
//! Fan and complex isomorphism are complete decision procedures. Ring
//! isomorphism is searched over all degree-2 matrices with entries in a box,
//! so an empty result means "none with entries up to the bound", never "none
//! exists"; every report carries the bound.

use std::collections::{HashMap, HashSet};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::cohomology::{CohClass, GradedRing};
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::simplicial::SimplicialComplex;
use crate::zlattice::{IntMatrix, IntVector};

/// Decide unimodular equivalence of two fans: search for a determinant ±1
/// matrix mapping the rays of `f` bijectively onto the rays of `g` and the
/// maximal cones onto the maximal cones.
///
/// The search fixes the first maximal cone of `f` and tries every maximal
/// cone of `g` under every ordering of its rays; since an equivalence must
/// send the fixed cone to some maximal cone, this is a complete decision
/// procedure. Returns the first matrix found in that enumeration order.
pub fn fans_isomorphic(f: &Fan, g: &Fan) -> Option<IntMatrix> {
    if f.dim() != g.dim()
        || f.rays().len() != g.rays().len()
        || f.max_cones().len() != g.max_cones().len()
    {
        return None;
    }
    let n = f.dim();
    if n == 0 {
        return Some(IntMatrix::identity(0));
    }
    let sigma = &f.max_cones()[0];
    if sigma.len() != n {
        return None;
    }
    let mat_a = f.cone_matrix(sigma);
    let det_a = mat_a.det().ok()?;
    if det_a.is_zero() {
        return None;
    }
    let adj_a = mat_a.adjugate().ok()?;

    let ray_index: HashMap<&IntVector, usize> =
        g.rays().iter().enumerate().map(|(i, r)| (r, i)).collect();
    let g_cones: HashSet<&[usize]> = g.max_cones().iter().map(|c| c.as_slice()).collect();

    for tau in g.max_cones() {
        if tau.len() != n {
            continue;
        }
        for perm in tau.iter().copied().permutations(n) {
            let mat_b = g.cone_matrix(&perm);
            // Candidate is B * A^{-1}; keep it only if integral.
            let scaled = mat_b.mul(&adj_a).expect("shape");
            let mut entries = Vec::with_capacity(n * n);
            let mut integral = true;
            'scan: for r in 0..n {
                for c in 0..n {
                    let (q, rem) = num_integer::Integer::div_rem(scaled.get(r, c), &det_a);
                    if !rem.is_zero() {
                        integral = false;
                        break 'scan;
                    }
                    entries.push(q);
                }
            }
            if !integral {
                continue;
            }
            let phi = IntMatrix::new(n, n, entries).expect("shape");
            if !phi.is_unimodular().unwrap_or(false) {
                continue;
            }
            if let Some(map) = ray_bijection(f, g, &phi, &ray_index) {
                let cones_match = f.max_cones().iter().all(|cone| {
                    let mut image: Vec<usize> = cone.iter().map(|&r| map[r]).collect();
                    image.sort_unstable();
                    g_cones.contains(image.as_slice())
                });
                if cones_match {
                    return Some(phi);
                }
            }
        }
    }
    None
}

/// The ray relabelling `i -> map[i]` induced by `phi`, if `phi` maps the ray
/// set of `f` bijectively onto the ray set of `g`.
pub fn induced_ray_bijection(f: &Fan, g: &Fan, phi: &IntMatrix) -> Option<Vec<usize>> {
    let ray_index: HashMap<&IntVector, usize> =
        g.rays().iter().enumerate().map(|(i, r)| (r, i)).collect();
    ray_bijection(f, g, phi, &ray_index)
}

fn ray_bijection(
    f: &Fan,
    g: &Fan,
    phi: &IntMatrix,
    ray_index: &HashMap<&IntVector, usize>,
) -> Option<Vec<usize>> {
    let mut map = Vec::with_capacity(f.rays().len());
    let mut hit = vec![false; g.rays().len()];
    for ray in f.rays() {
        let image = phi.mul_vec(ray).ok()?;
        let &target = ray_index.get(&image)?;
        if hit[target] {
            return None;
        }
        hit[target] = true;
        map.push(target);
    }
    Some(map)
}

/// Exact simplicial-complex isomorphism by backtracking over vertex
/// bijections, pruned by facet-membership degrees and facet-size profiles.
/// Returns a vertex map `i -> map[i]` or `None`.
pub fn complexes_isomorphic(s: &SimplicialComplex, t: &SimplicialComplex) -> Option<Vec<usize>> {
    let mut found = None;
    search_isomorphisms(s, t, &mut |map| {
        found = Some(map.to_vec());
        true
    });
    found
}

/// All automorphisms of a complex, in lexicographic order of the vertex map.
pub fn complex_automorphisms(s: &SimplicialComplex) -> Vec<Vec<usize>> {
    let mut all = Vec::new();
    search_isomorphisms(s, s, &mut |map| {
        all.push(map.to_vec());
        false
    });
    all.sort();
    all
}

/// Backtracking core shared by the decision and enumeration entry points.
/// `emit` receives each isomorphism found; returning `true` stops the search.
fn search_isomorphisms(
    s: &SimplicialComplex,
    t: &SimplicialComplex,
    emit: &mut dyn FnMut(&[usize]) -> bool,
) {
    let m = s.vertex_count();
    if m != t.vertex_count() || s.facets().len() != t.facets().len() {
        return;
    }
    let size_profile = |c: &SimplicialComplex| {
        let mut sizes: Vec<usize> = c.facets().iter().map(|f| f.len()).collect();
        sizes.sort_unstable();
        sizes
    };
    if size_profile(s) != size_profile(t) {
        return;
    }
    // Per-vertex invariant: sorted sizes of the facets through the vertex.
    let signature = |c: &SimplicialComplex| -> Vec<Vec<usize>> {
        let mut sig = vec![Vec::new(); c.vertex_count()];
        for f in c.facets() {
            for &v in f {
                sig[v].push(f.len());
            }
        }
        for v in &mut sig {
            v.sort_unstable();
        }
        sig
    };
    let sig_s = signature(s);
    let sig_t = signature(t);

    let s_facets_through: Vec<Vec<usize>> = {
        let mut through = vec![Vec::new(); m];
        for (fi, f) in s.facets().iter().enumerate() {
            for &v in f {
                through[v].push(fi);
            }
        }
        through
    };
    let t_facet_set: HashSet<&[usize]> = t.facets().iter().map(|f| f.as_slice()).collect();

    // Assign the most constrained vertices first.
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&v| {
        let candidates = (0..m).filter(|&w| sig_t[w] == sig_s[v]).count();
        (candidates, v)
    });

    let mut mapping = vec![usize::MAX; m];
    let mut used = vec![false; m];
    backtrack(
        &Ctx { s, t, t_facet_set: &t_facet_set, s_facets_through: &s_facets_through, sig_s: &sig_s, sig_t: &sig_t, order: &order },
        0,
        &mut mapping,
        &mut used,
        emit,
    );

    struct Ctx<'a> {
        s: &'a SimplicialComplex,
        t: &'a SimplicialComplex,
        t_facet_set: &'a HashSet<&'a [usize]>,
        s_facets_through: &'a [Vec<usize>],
        sig_s: &'a [Vec<usize>],
        sig_t: &'a [Vec<usize>],
        order: &'a [usize],
    }

    fn consistent(ctx: &Ctx, mapping: &[usize], v: usize) -> bool {
        for &fi in &ctx.s_facets_through[v] {
            let facet = &ctx.s.facets()[fi];
            let mut image: Vec<usize> = Vec::with_capacity(facet.len());
            let mut complete = true;
            for &u in facet {
                if mapping[u] == usize::MAX {
                    complete = false;
                } else {
                    image.push(mapping[u]);
                }
            }
            image.sort_unstable();
            if complete {
                if !ctx.t_facet_set.contains(image.as_slice()) {
                    return false;
                }
            } else if !ctx
                .t
                .facets()
                .iter()
                .any(|tf| image.iter().all(|w| tf.contains(w)))
            {
                return false;
            }
        }
        true
    }

    fn backtrack(
        ctx: &Ctx,
        pos: usize,
        mapping: &mut Vec<usize>,
        used: &mut Vec<bool>,
        emit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if pos == ctx.order.len() {
            // Every facet image was checked on completion: the map sends
            // facets into facets injectively, and the counts match, so it is
            // onto the facet set as well.
            return emit(mapping);
        }
        let v = ctx.order[pos];
        for w in 0..ctx.t.vertex_count() {
            if used[w] || ctx.sig_t[w] != ctx.sig_s[v] {
                continue;
            }
            mapping[v] = w;
            used[w] = true;
            if consistent(ctx, mapping, v) && backtrack(ctx, pos + 1, mapping, used, emit) {
                return true;
            }
            mapping[v] = usize::MAX;
            used[w] = false;
        }
        false
    }
}

/// A candidate graded-ring map, recorded by its matrix on the degree-2
/// part: column `j` holds the target coordinates of the `j`-th source basis
/// class. Everything a map does in higher degrees is determined by this
/// matrix, because the rings are generated in degree 2.
#[derive(Clone, Debug, Serialize)]
pub struct RingMap {
    pub matrix: IntMatrix,
}

/// Degree-2 monomial model of a graded ring: for each polynomial degree k,
/// the monomials in the degree-2 basis, their classes, the kernel of the
/// evaluation (the degree-2k relations), and one expression of each basis
/// class as a polynomial in the degree-2 basis.
struct RingModel<'r> {
    ring: &'r GradedRing,
    n: usize,
    r: usize,
    monos: Vec<Vec<Vec<u16>>>,
    /// per degree k >= 2: (first variable of the monomial, parent index in degree k-1)
    parents: Vec<Vec<(usize, usize)>>,
    /// per degree k >= 2: kernel vectors over the degree-k monomials
    kernels: Vec<Vec<Vec<BigInt>>>,
    /// per degree k >= 1: for each basis class, a monomial combination mapping to it
    basis_expr: Vec<Vec<Vec<BigInt>>>,
    /// per degree k in 1..n-1: [i][j] -> coordinates of basis_k[i] * basis_1[j]
    table1: Vec<Vec<Vec<Vec<BigInt>>>>,
}

/// Monomials of total degree `k` in `r` variables, in descending
/// lexicographic order of exponent vectors (variable order in degree one).
fn monomials_of_degree(r: usize, k: usize) -> Vec<Vec<u16>> {
    fn go(var: usize, remaining: u16, r: usize, expo: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if var == r {
            if remaining == 0 {
                out.push(expo.clone());
            }
            return;
        }
        for e in (0..=remaining).rev() {
            expo[var] = e;
            go(var + 1, remaining - e, r, expo, out);
        }
        expo[var] = 0;
    }
    let mut out = Vec::new();
    let mut expo = vec![0u16; r];
    go(0, k as u16, r, &mut expo, &mut out);
    out
}

impl<'r> RingModel<'r> {
    fn new(ring: &'r GradedRing) -> Result<Self> {
        let n = ring.complex_dim();
        let r = ring.rank(1);
        let basis_class =
            |k: usize, i: usize| -> CohClass {
                let mut coords = vec![BigInt::zero(); ring.rank(k)];
                coords[i] = BigInt::one();
                ring.class_from_coords(2 * k, coords).expect("basis class")
            };

        let mut monos: Vec<Vec<Vec<u16>>> = vec![Vec::new()];
        let mut parents: Vec<Vec<(usize, usize)>> = vec![Vec::new(), Vec::new()];
        let mut classes: Vec<Vec<CohClass>> = vec![Vec::new()];
        // Degree-1 monomials in variable order, so that list position j is
        // the variable y_j; candidate images index this level by column.
        monos.push(
            (0..r)
                .map(|j| {
                    let mut e = vec![0u16; r];
                    e[j] = 1;
                    e
                })
                .collect(),
        );
        classes.push((0..r).map(|i| basis_class(1, i)).collect());

        for k in 2..=n {
            let level = monomials_of_degree(r, k);
            let mut index_prev: HashMap<&[u16], usize> = HashMap::new();
            for (i, e) in monos[k - 1].iter().enumerate() {
                index_prev.insert(e.as_slice(), i);
            }
            let mut level_parents = Vec::with_capacity(level.len());
            let mut level_classes = Vec::with_capacity(level.len());
            for expo in &level {
                let j = expo.iter().position(|&e| e > 0).expect("positive degree");
                let mut parent = expo.clone();
                parent[j] -= 1;
                let pi = index_prev[parent.as_slice()];
                let class = ring.cup(&classes[k - 1][pi], &classes[1][j])?;
                level_parents.push((j, pi));
                level_classes.push(class);
            }
            monos.push(level);
            parents.push(level_parents);
            classes.push(level_classes);
        }

        let mut kernels: Vec<Vec<Vec<BigInt>>> = vec![Vec::new(), Vec::new()];
        let mut basis_expr: Vec<Vec<Vec<BigInt>>> = vec![Vec::new()];
        for k in 1..=n {
            let cols = monos[k].len();
            let rank = ring.rank(k);
            let mut g = IntMatrix::zeros(rank, cols);
            for (c, class) in classes[k].iter().enumerate() {
                for (row, v) in class.coords.iter().enumerate() {
                    g.set(row, c, v.clone());
                }
            }
            if k >= 2 {
                kernels.push(g.kernel().into_iter().map(|v| v.entries().to_vec()).collect());
            }
            let mut exprs = Vec::with_capacity(rank);
            for t in 0..rank {
                let mut e = vec![BigInt::zero(); rank];
                e[t] = BigInt::one();
                let w = g.solve(&IntVector::new(e)).ok_or_else(|| {
                    Error::Inconsistency("graded ring is not generated in degree 2".into())
                })?;
                exprs.push(w.entries().to_vec());
            }
            basis_expr.push(exprs);
        }

        let mut table1 = Vec::new();
        for k in 1..n {
            let mut tk = Vec::with_capacity(ring.rank(k));
            for i in 0..ring.rank(k) {
                let mut row = Vec::with_capacity(r);
                for j in 0..r {
                    let prod = ring.cup(&basis_class(k, i), &classes[1][j])?;
                    row.push(prod.coords);
                }
                tk.push(row);
            }
            table1.push(tk);
        }

        Ok(RingModel { ring, n, r, monos, parents, kernels, basis_expr, table1 })
    }

    /// Target coordinates, degree by degree, of the monomial images under the
    /// candidate whose degree-2 columns live in `target`. Returns `None` as
    /// soon as a relation of this (source) model fails to die.
    fn monomial_images(
        &self,
        target: &RingModel,
        matrix: &IntMatrix,
    ) -> Option<Vec<Vec<Vec<BigInt>>>> {
        let mut images: Vec<Vec<Vec<BigInt>>> = vec![Vec::new()];
        images.push((0..self.r).map(|j| matrix.col(j).entries().to_vec()).collect());
        for k in 2..=self.n {
            let mut level = Vec::with_capacity(self.monos[k].len());
            for (a, &(j, parent)) in self.parents[k].iter().enumerate() {
                debug_assert_eq!(self.monos[k].len(), self.parents[k].len());
                let _ = a;
                let prev = &images[k - 1][parent];
                let col = &images[1][j];
                level.push(mul_by_degree2(target, k - 1, prev, col));
            }
            for kernel in &self.kernels[k] {
                let rank = target.ring.rank(k);
                let mut acc = vec![BigInt::zero(); rank];
                for (a, coeff) in kernel.iter().enumerate() {
                    if coeff.is_zero() {
                        continue;
                    }
                    for (t, v) in level[a].iter().enumerate() {
                        acc[t] += coeff * v;
                    }
                }
                if acc.iter().any(|v| !v.is_zero()) {
                    return None;
                }
            }
            images.push(level);
        }
        Some(images)
    }
}

/// Multiply target coordinates of a degree-2k class with a degree-2 class
/// through the target's product table.
fn mul_by_degree2(target: &RingModel, k: usize, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let table = &target.table1[k - 1];
    let rank = target.ring.rank(k + 1);
    let mut out = vec![BigInt::zero(); rank];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            let scale = ai * bj;
            for (t, v) in table[i][j].iter().enumerate() {
                out[t] += v * &scale;
            }
        }
    }
    out
}

/// Fixed-width mirror of the candidate check used in the enumeration hot
/// loop. It is only constructed when a statically computed worst-case bound
/// on every intermediate value fits comfortably in i128, so the unchecked
/// arithmetic inside `check` cannot overflow and agrees exactly with the
/// arbitrary-precision path.
struct FastSearch {
    n: usize,
    r: usize,
    ranks: Vec<usize>,
    parents: Vec<Vec<(usize, usize)>>,
    /// per degree: sparse kernel vectors as (monomial index, coefficient)
    kernels: Vec<Vec<Vec<(usize, i128)>>>,
    /// per k = 1..n-1: flat (k,1)-product table, laid out as
    /// [(i * r + j) * rank_{k+1} + t]
    tables: Vec<Vec<i128>>,
}

struct FastScratch {
    /// per degree k: flat image buffer, [a * rank_k + t]
    img: Vec<Vec<i128>>,
    det: Vec<i128>,
}

impl FastSearch {
    fn build(source: &RingModel, target: &RingModel, bound: u32) -> Option<FastSearch> {
        let limit = BigInt::one() << 120;
        let big = |x: i128| BigInt::from(x);

        let tables: Vec<Vec<i128>> = target
            .table1
            .iter()
            .enumerate()
            .map(|(idx, tk)| {
                let rank_out = target.ring.rank(idx + 2);
                let mut flat = Vec::with_capacity(tk.len() * source.r * rank_out);
                for row in tk {
                    for cell in row {
                        for v in cell {
                            flat.push(v.to_i128()?);
                        }
                    }
                }
                Some(flat)
            })
            .collect::<Option<Vec<_>>>()?;
        let kernels: Vec<Vec<Vec<(usize, i128)>>> = source
            .kernels
            .iter()
            .map(|level| {
                level
                    .iter()
                    .map(|v| {
                        v.iter()
                            .enumerate()
                            .filter(|(_, x)| !x.is_zero())
                            .map(|(i, x)| Some((i, x.to_i128()?)))
                            .collect::<Option<Vec<_>>>()
                    })
                    .collect::<Option<Vec<_>>>()
            })
            .collect::<Option<Vec<_>>>()?;

        // Worst-case magnitude of a degree-k image coordinate, then of any
        // kernel accumulation; abort to the exact path if i128 could be
        // strained.
        let max_table: BigInt = tables
            .iter()
            .flatten()
            .map(|&v| big(v).abs())
            .max()
            .unwrap_or_else(BigInt::zero);
        let r = source.r;
        let mut level_bound = BigInt::from(bound);
        for k in 2..=source.n {
            let terms = BigInt::from(target.ring.rank(k - 1) * r);
            level_bound = terms * &level_bound * BigInt::from(bound) * (max_table.clone() + BigInt::one());
            if level_bound > limit {
                return None;
            }
        }
        let max_kernel: BigInt = kernels
            .iter()
            .flatten()
            .flatten()
            .map(|(_, v)| big(*v).abs())
            .max()
            .unwrap_or_else(BigInt::zero);
        let mono_max = source.monos.iter().map(|l| l.len()).max().unwrap_or(1);
        if BigInt::from(mono_max) * max_kernel * &level_bound > limit {
            return None;
        }
        // Bareiss on the r x r candidate: entries below bound^(2r) r^r.
        let mut det_bound = BigInt::one();
        for _ in 0..r {
            det_bound *= BigInt::from(bound as u64 + 1) * BigInt::from(r as u64 + 1);
            det_bound *= BigInt::from(bound as u64 + 1);
        }
        if det_bound > limit {
            return None;
        }

        Some(FastSearch {
            n: source.n,
            r,
            ranks: (0..=source.n).map(|k| target.ring.rank(k)).collect(),
            parents: source.parents.clone(),
            kernels,
            tables,
        })
    }

    fn scratch(&self) -> FastScratch {
        FastScratch {
            img: (0..=self.n)
                .map(|k| {
                    let monos = if k == 0 {
                        0
                    } else if k == 1 {
                        self.r
                    } else {
                        self.parents[k].len()
                    };
                    vec![0i128; monos * self.ranks[k].max(1)]
                })
                .collect(),
            det: vec![0i128; self.r * self.r],
        }
    }

    fn check(&self, entries: &[i64], scratch: &mut FastScratch) -> bool {
        let r = self.r;
        for a in 0..r {
            for t in 0..r {
                scratch.img[1][a * r + t] = entries[t * r + a] as i128;
            }
        }
        for k in 2..=self.n {
            let rank_out = self.ranks[k];
            let rank_in = self.ranks[k - 1];
            let table = &self.tables[k - 2];
            let (lower, upper) = scratch.img.split_at_mut(k);
            let prev_level = &lower[k - 1];
            let col_level = &lower[1];
            let level = &mut upper[0];
            for (a, &(j, parent)) in self.parents[k].iter().enumerate() {
                let out = &mut level[a * rank_out..(a + 1) * rank_out];
                out.fill(0);
                let prev = &prev_level[parent * rank_in..(parent + 1) * rank_in];
                let col = &col_level[j * r..(j + 1) * r];
                for (i, &ai) in prev.iter().enumerate() {
                    if ai == 0 {
                        continue;
                    }
                    for (jj, &bj) in col.iter().enumerate() {
                        if bj == 0 {
                            continue;
                        }
                        let scale = ai * bj;
                        let cell = &table[(i * r + jj) * rank_out..(i * r + jj + 1) * rank_out];
                        for (t, &v) in cell.iter().enumerate() {
                            out[t] += v * scale;
                        }
                    }
                }
            }
            for kernel in &self.kernels[k] {
                for t in 0..rank_out {
                    let mut acc = 0i128;
                    for &(a, coeff) in kernel {
                        acc += coeff * level[a * rank_out + t];
                    }
                    if acc != 0 {
                        return false;
                    }
                }
            }
            if k == 2 && !self.unimodular(entries, &mut scratch.det) {
                return false;
            }
        }
        if self.n < 2 && !self.unimodular(entries, &mut scratch.det) {
            return false;
        }
        true
    }

    /// |det| == 1 via fraction-free elimination; bounds were pre-checked.
    fn unimodular(&self, entries: &[i64], m: &mut [i128]) -> bool {
        let r = self.r;
        for (dst, &src) in m.iter_mut().zip(entries) {
            *dst = src as i128;
        }
        let mut prev: i128 = 1;
        for k in 0..r.saturating_sub(1) {
            if m[k * r + k] == 0 {
                let Some(swap) = (k + 1..r).find(|&i| m[i * r + k] != 0) else {
                    return false;
                };
                for c in 0..r {
                    m.swap(k * r + c, swap * r + c);
                }
            }
            for i in k + 1..r {
                for j in k + 1..r {
                    m[i * r + j] =
                        (m[i * r + j] * m[k * r + k] - m[i * r + k] * m[k * r + j]) / prev;
                }
            }
            prev = m[k * r + k];
        }
        let det = if r == 0 { 1 } else { m[(r - 1) * r + (r - 1)] };
        det == 1 || det == -1
    }
}

fn check_candidate_exact(
    source: &RingModel,
    target: &RingModel,
    matrix: &IntMatrix,
) -> bool {
    if !matrix.is_unimodular().unwrap_or(false) {
        return false;
    }
    source.monomial_images(target, matrix).is_some()
}

/// Elementary divisors of the cup pairing between complementary degrees,
/// one list per degree; a graded-ring isomorphism preserves them.
fn pairing_profile(ring: &GradedRing) -> Result<Vec<Vec<BigInt>>> {
    let n = ring.complex_dim();
    let mut out = Vec::new();
    for k in 0..=n / 2 {
        let rk = ring.rank(k);
        let rl = ring.rank(n - k);
        let mut p = IntMatrix::zeros(rk, rl);
        for i in 0..rk {
            let mut ci = vec![BigInt::zero(); rk];
            ci[i] = BigInt::one();
            let a = ring.class_from_coords(2 * k, ci)?;
            for j in 0..rl {
                let mut cj = vec![BigInt::zero(); rl];
                cj[j] = BigInt::one();
                let b = ring.class_from_coords(2 * (n - k), cj)?;
                let v = ring.integrate(&ring.cup(&a, &b)?)?;
                p.set(i, j, v);
            }
        }
        out.push(p.smith_normal_form().diagonal());
    }
    Ok(out)
}

/// All graded-ring isomorphisms from `source` to `target` whose degree-2
/// matrix has entries in `[-bound, bound]`, in lexicographic order of the
/// matrix entries. Bounded-exhaustive: an empty answer only rules out maps
/// within the box.
pub fn ring_isomorphisms(
    source: &GradedRing,
    target: &GradedRing,
    bound: u32,
) -> Result<Vec<RingMap>> {
    if source.betti_numbers() != target.betti_numbers() {
        return Ok(Vec::new());
    }
    if pairing_profile(source)? != pairing_profile(target)? {
        return Ok(Vec::new());
    }
    let source_model = RingModel::new(source)?;
    let target_model = RingModel::new(target)?;
    let r = source_model.r;
    if r == 0 {
        // Zero-dimensional manifold: the unique map is the identity.
        return Ok(vec![RingMap { matrix: IntMatrix::identity(0) }]);
    }

    let fast = FastSearch::build(&source_model, &target_model, bound);
    let mut scratch = fast.as_ref().map(|f| f.scratch());
    let b = bound as i64;
    let mut entries = vec![-b; r * r];
    let mut out = Vec::new();
    loop {
        let plausible = match (&fast, &mut scratch) {
            (Some(f), Some(s)) => f.check(&entries, s),
            _ => true,
        };
        // Survivors of the fixed-width filter are rare; confirm each one in
        // exact arithmetic, which is also the only path when the static
        // overflow bound ruled the filter out.
        if plausible {
            let matrix =
                IntMatrix::new(r, r, entries.iter().map(|&x| BigInt::from(x)).collect())
                    .expect("shape");
            if check_candidate_exact(&source_model, &target_model, &matrix) {
                out.push(RingMap { matrix });
            }
        }
        // odometer, ascending lexicographic
        let mut pos = r * r;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            if entries[pos] < b {
                entries[pos] += 1;
                break;
            }
            entries[pos] = -b;
        }
    }
}

/// Induced matrices of a ring map in every degree `0..=n`, verifying on the
/// way that the source relations die and that each degree is unimodular and
/// compatible with the cup products. Errors describe the first failure.
pub fn verify_ring_map(
    map: &RingMap,
    source: &GradedRing,
    target: &GradedRing,
) -> Result<Vec<IntMatrix>> {
    let source_model = RingModel::new(source)?;
    let target_model = RingModel::new(target)?;
    induced_matrices(map, &source_model, &target_model)
}

fn induced_matrices(
    map: &RingMap,
    source_model: &RingModel,
    target_model: &RingModel,
) -> Result<Vec<IntMatrix>> {
    let source = source_model.ring;
    let target = target_model.ring;
    let n = source.complex_dim();
    if target.complex_dim() != n || source.betti_numbers() != target.betti_numbers() {
        return Err(Error::NotAnIsomorphism("graded ranks differ".into()));
    }
    if map.matrix.rows() != source.rank(1) || map.matrix.cols() != source.rank(1) {
        return Err(Error::NotAnIsomorphism("degree-2 matrix has wrong shape".into()));
    }
    let images = source_model
        .monomial_images(target_model, &map.matrix)
        .ok_or_else(|| Error::NotAnIsomorphism("a source relation does not map to zero".into()))?;

    let mut induced = vec![IntMatrix::identity(1)];
    for k in 1..=n {
        let rank = source.rank(k);
        let mut phi = IntMatrix::zeros(rank, rank);
        for t in 0..rank {
            let expr = &source_model.basis_expr[k][t];
            let mut acc = vec![BigInt::zero(); rank];
            for (a, coeff) in expr.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                for (row, v) in images[k][a].iter().enumerate() {
                    acc[row] += coeff * v;
                }
            }
            for (row, v) in acc.into_iter().enumerate() {
                phi.set(row, t, v);
            }
        }
        if !phi.is_unimodular().unwrap_or(false) {
            return Err(Error::NotAnIsomorphism(format!(
                "induced matrix in degree {} is not unimodular",
                2 * k
            )));
        }
        induced.push(phi);
    }

    // Cup products must commute with the map on every pair of basis classes.
    for k in 1..=n {
        for l in k..=n {
            if k + l > n {
                break;
            }
            for i in 0..source.rank(k) {
                for j in 0..source.rank(l) {
                    let a = basis_class(source, k, i);
                    let b = basis_class(source, l, j);
                    let prod = source.cup(&a, &b)?;
                    let lhs = apply_matrix(&induced[k + l], &prod.coords);
                    let fa = target.class_from_coords(2 * k, apply_matrix(&induced[k], &a.coords))?;
                    let fb =
                        target.class_from_coords(2 * l, apply_matrix(&induced[l], &b.coords))?;
                    let rhs = target.cup(&fa, &fb)?;
                    if lhs != rhs.coords {
                        return Err(Error::NotAnIsomorphism(format!(
                            "cup product not preserved on degrees ({}, {})",
                            2 * k,
                            2 * l
                        )));
                    }
                }
            }
        }
    }
    Ok(induced)
}

fn basis_class(ring: &GradedRing, k: usize, i: usize) -> CohClass {
    let mut coords = vec![BigInt::zero(); ring.rank(k)];
    coords[i] = BigInt::one();
    ring.class_from_coords(2 * k, coords).expect("basis class")
}

fn apply_matrix(m: &IntMatrix, coords: &[BigInt]) -> Vec<BigInt> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.get(r, c) * &coords[c]).sum())
        .collect()
}

/// Push a class of the source ring through a verified ring map.
pub fn apply_ring_map(
    map: &RingMap,
    source: &GradedRing,
    target: &GradedRing,
    class: &CohClass,
) -> Result<CohClass> {
    let induced = verify_ring_map(map, source, target)?;
    let k = class.degree / 2;
    target.class_from_coords(class.degree, apply_matrix(&induced[k], &class.coords))
}

/// Does the map send every Pontrjagin class of the source to the matching
/// Pontrjagin class of the target? The map must be a verified isomorphism.
pub fn preserves_pontrjagin(
    map: &RingMap,
    source: &GradedRing,
    target: &GradedRing,
) -> Result<bool> {
    let induced = verify_ring_map(map, source, target)?;
    classes_match(&induced, &source.pontrjagin_classes(), &target.pontrjagin_classes())
}

/// Chern-class variant of [`preserves_pontrjagin`]; a strictly stronger
/// diagnostic, since homeomorphisms need not preserve Chern classes.
pub fn preserves_chern(map: &RingMap, source: &GradedRing, target: &GradedRing) -> Result<bool> {
    let induced = verify_ring_map(map, source, target)?;
    classes_match(&induced, &source.chern_classes(), &target.chern_classes())
}

fn classes_match(
    induced: &[IntMatrix],
    from: &[CohClass],
    to: &[CohClass],
) -> Result<bool> {
    if from.len() != to.len() {
        return Ok(false);
    }
    for (a, b) in from.iter().zip(to) {
        let k = a.degree / 2;
        if apply_matrix(&induced[k], &a.coords) != b.coords {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The ring isomorphism induced by a fan equivalence: each divisor class
/// maps to the class of its image ray. Verified before being returned.
pub fn induced_ring_map(
    f: &Fan,
    g: &Fan,
    phi: &IntMatrix,
    source: &GradedRing,
    target: &GradedRing,
) -> Result<RingMap> {
    let bijection = induced_ray_bijection(f, g, phi).ok_or(Error::NoRayBijection)?;
    let r = source.rank(1);
    let mut matrix = IntMatrix::zeros(r, r);
    for t in 0..r {
        let basis = basis_class(source, 1, t);
        let lift = source.lift(&basis)?;
        let mut acc = vec![BigInt::zero(); r];
        for (expo, coeff) in lift {
            let i = expo.iter().position(|&e| e == 1).expect("degree-1 monomial");
            let image = target.generator_image(bijection[i]);
            for (row, v) in image.coords.iter().enumerate() {
                acc[row] += &coeff * v;
            }
        }
        for (row, v) in acc.into_iter().enumerate() {
            matrix.set(row, t, v);
        }
    }
    let map = RingMap { matrix };
    verify_ring_map(&map, source, target)?;
    Ok(map)
}

/// Per-pair record of the Pontrjagin and Chern behaviour of the ring
/// isomorphisms found within the bound.
#[derive(Clone, Debug, Serialize)]
pub struct PairFlags {
    pub a: String,
    pub b: String,
    pub isomorphisms_found: usize,
    pub some_preserve_pontrjagin: bool,
    pub all_preserve_pontrjagin: bool,
    pub some_preserve_chern: bool,
    pub all_preserve_chern: bool,
    /// First isomorphism found, as its degree-2 matrix.
    pub witness: Option<IntMatrix>,
}

/// Outcome of classifying a family of fans: the three partitions, the
/// characteristic-class flags per ring-isomorphic pair, and rigidity
/// witnesses (ring-isomorphic pairs with non-isomorphic complexes).
///
/// Fan and complex classification are exact; the ring partition groups by
/// isomorphisms *found* within `search_bound`, so it is honest only as
/// "within the bound" (`ring_search_exhaustive` is always false).
#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub members: Vec<String>,
    pub fan_iso_classes: Vec<Vec<String>>,
    pub complex_iso_classes: Vec<Vec<String>>,
    pub ring_iso_classes: Vec<Vec<String>>,
    pub pontrjagin_flags: Vec<PairFlags>,
    pub rigidity_witnesses: Vec<[String; 2]>,
    pub search_bound: u32,
    pub ring_search_exhaustive: bool,
    pub fan_search_exhaustive: bool,
    pub complex_search_exhaustive: bool,
}

/// Pairwise classification of a family under the three deciders, probing
/// which ring isomorphisms preserve the Pontrjagin (and Chern) classes.
pub fn classify_family(ids: &[String], fans: &[Fan], bound: u32) -> Result<ClassificationReport> {
    if ids.len() != fans.len() {
        return Err(Error::InvalidParameter("one id per fan required".into()));
    }
    let count = fans.len();
    let rings: Vec<GradedRing> = fans
        .iter()
        .map(crate::cohomology::ordinary_cohomology)
        .collect::<Result<Vec<_>>>()?;
    let complexes: Vec<SimplicialComplex> = fans
        .iter()
        .map(|f| f.underlying_complex())
        .collect::<Result<Vec<_>>>()?;

    let mut fan_classes = Partition::new(count);
    let mut complex_classes = Partition::new(count);
    let mut ring_classes = Partition::new(count);
    let mut flags = Vec::new();
    let mut rigidity = Vec::new();

    for (i, j) in (0..count).tuple_combinations() {
        if fans_isomorphic(&fans[i], &fans[j]).is_some() {
            fan_classes.union(i, j);
        }
        let complexes_iso = complexes_isomorphic(&complexes[i], &complexes[j]).is_some();
        if complexes_iso {
            complex_classes.union(i, j);
        }
        let isos = ring_isomorphisms(&rings[i], &rings[j], bound)?;
        if !isos.is_empty() {
            ring_classes.union(i, j);
            let mut some_p = false;
            let mut all_p = true;
            let mut some_c = false;
            let mut all_c = true;
            for iso in &isos {
                let p = preserves_pontrjagin(iso, &rings[i], &rings[j])?;
                some_p |= p;
                all_p &= p;
                let c = preserves_chern(iso, &rings[i], &rings[j])?;
                some_c |= c;
                all_c &= c;
            }
            flags.push(PairFlags {
                a: ids[i].clone(),
                b: ids[j].clone(),
                isomorphisms_found: isos.len(),
                some_preserve_pontrjagin: some_p,
                all_preserve_pontrjagin: all_p,
                some_preserve_chern: some_c,
                all_preserve_chern: all_c,
                witness: Some(isos[0].matrix.clone()),
            });
            if !complexes_iso {
                rigidity.push([ids[i].clone(), ids[j].clone()]);
            }
        }
    }

    Ok(ClassificationReport {
        members: ids.to_vec(),
        fan_iso_classes: fan_classes.classes(ids),
        complex_iso_classes: complex_classes.classes(ids),
        ring_iso_classes: ring_classes.classes(ids),
        pontrjagin_flags: flags,
        rigidity_witnesses: rigidity,
        search_bound: bound,
        ring_search_exhaustive: false,
        fan_search_exhaustive: true,
        complex_search_exhaustive: true,
    })
}

struct Partition {
    parent: Vec<usize>,
}

impl Partition {
    fn new(n: usize) -> Self {
        Partition { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let lo = ra.min(rb);
            let hi = ra.max(rb);
            self.parent[hi] = lo;
        }
    }

    /// Classes in order of first appearance, members in input order.
    fn classes(&mut self, ids: &[String]) -> Vec<Vec<String>> {
        let n = self.parent.len();
        let mut groups: Vec<(usize, Vec<String>)> = Vec::new();
        for x in 0..n {
            let root = self.find(x);
            match groups.iter_mut().find(|(r, _)| *r == root) {
                Some((_, members)) => members.push(ids[x].clone()),
                None => groups.push((root, vec![ids[x].clone()])),
            }
        }
        groups.into_iter().map(|(_, members)| members).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::ordinary_cohomology;
    use crate::fan::{hirzebruch, projective_space};

    #[test]
    fn cp2_is_isomorphic_to_itself() {
        let f = projective_space(2).unwrap();
        let phi = fans_isomorphic(&f, &f).unwrap();
        assert!(phi.is_unimodular().unwrap());
    }

    #[test]
    fn hirzebruch_sign_flip() {
        let phi = fans_isomorphic(&hirzebruch(1), &hirzebruch(-1)).unwrap();
        assert!(phi.is_unimodular().unwrap());
        assert!(fans_isomorphic(&hirzebruch(0), &hirzebruch(2)).is_none());
    }

    #[test]
    fn complex_iso_basics() {
        let tri = SimplicialComplex::new(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let sq = SimplicialComplex::new(4, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]])
            .unwrap();
        assert!(complexes_isomorphic(&tri, &tri).is_some());
        assert!(complexes_isomorphic(&tri, &sq).is_none());

        // Relabelled square: the 4-cycle 0-2-1-3.
        let sq2 = SimplicialComplex::new(4, vec![vec![0, 2], vec![1, 2], vec![1, 3], vec![0, 3]])
            .unwrap();
        let map = complexes_isomorphic(&sq, &sq2).unwrap();
        for f in sq.facets() {
            let mut img: Vec<usize> = f.iter().map(|&v| map[v]).collect();
            img.sort_unstable();
            assert!(sq2.facets().contains(&img));
        }
    }

    #[test]
    fn square_automorphisms_form_dihedral_group() {
        let sq = SimplicialComplex::new(4, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]])
            .unwrap();
        let autos = complex_automorphisms(&sq);
        assert_eq!(autos.len(), 8);
        assert!(autos.contains(&vec![0, 1, 2, 3]));
        assert!(autos.windows(2).all(|w| w[0] < w[1]), "sorted output");
    }

    #[test]
    fn cp2_ring_automorphisms_at_bound_one() {
        let ring = ordinary_cohomology(&projective_space(2).unwrap()).unwrap();
        let isos = ring_isomorphisms(&ring, &ring, 1).unwrap();
        let matrices: Vec<_> = isos.iter().map(|m| m.matrix.clone()).collect();
        assert_eq!(
            matrices,
            vec![
                IntMatrix::from_rows_i64(&[&[-1]]),
                IntMatrix::from_rows_i64(&[&[1]]),
            ]
        );
    }

    #[test]
    fn even_hirzebruch_rings_are_isomorphic() {
        let r0 = ordinary_cohomology(&hirzebruch(0)).unwrap();
        let r2 = ordinary_cohomology(&hirzebruch(2)).unwrap();
        let isos = ring_isomorphisms(&r0, &r2, 1).unwrap();
        assert!(!isos.is_empty());
        // x -> x, y -> x + y kills both source relations in the target.
        let expected = IntMatrix::from_rows_i64(&[&[1, 1], &[0, 1]]);
        assert!(isos.iter().any(|m| m.matrix == expected));
        for iso in &isos {
            assert!(verify_ring_map(iso, &r0, &r2).is_ok());
        }
    }

    #[test]
    fn odd_vs_even_hirzebruch_rings_differ() {
        let r0 = ordinary_cohomology(&hirzebruch(0)).unwrap();
        let r1 = ordinary_cohomology(&hirzebruch(1)).unwrap();
        assert!(ring_isomorphisms(&r0, &r1, 5).unwrap().is_empty());
    }

    #[test]
    fn identity_is_always_found() {
        for a in [-2, 0, 3] {
            let ring = ordinary_cohomology(&hirzebruch(a)).unwrap();
            let isos = ring_isomorphisms(&ring, &ring, 1).unwrap();
            assert!(isos.iter().any(|m| m.matrix == IntMatrix::identity(2)));
        }
    }

    #[test]
    fn induced_map_of_fan_isomorphism_preserves_classes() {
        let f = hirzebruch(1);
        let g = hirzebruch(-1);
        let phi = fans_isomorphic(&f, &g).unwrap();
        let rf = ordinary_cohomology(&f).unwrap();
        let rg = ordinary_cohomology(&g).unwrap();
        let map = induced_ring_map(&f, &g, &phi, &rf, &rg).unwrap();
        assert!(preserves_pontrjagin(&map, &rf, &rg).unwrap());
        assert!(preserves_chern(&map, &rf, &rg).unwrap());
    }

    #[test]
    fn sign_flip_on_cp2_preserves_pontrjagin() {
        let ring = ordinary_cohomology(&projective_space(2).unwrap()).unwrap();
        let flip = RingMap { matrix: IntMatrix::from_rows_i64(&[&[-1]]) };
        assert!(preserves_pontrjagin(&flip, &ring, &ring).unwrap());
        // Chern classes see the sign: c_1 = 3x is odd-degree in x.
        assert!(!preserves_chern(&flip, &ring, &ring).unwrap());
    }

    #[test]
    fn f0_to_f2_shear_preserves_pontrjagin() {
        let r0 = ordinary_cohomology(&hirzebruch(0)).unwrap();
        let r2 = ordinary_cohomology(&hirzebruch(2)).unwrap();
        let shear = RingMap { matrix: IntMatrix::from_rows_i64(&[&[1, 1], &[0, 1]]) };
        assert!(preserves_pontrjagin(&shear, &r0, &r2).unwrap());
    }

    #[test]
    fn classify_hirzebruch_family() {
        let fans: Vec<Fan> = (0..=3).map(hirzebruch).collect();
        let ids: Vec<String> = (0..=3).map(|a| format!("F{}", a)).collect();
        let report = classify_family(&ids, &fans, 2).unwrap();
        assert_eq!(
            report.ring_iso_classes,
            vec![vec!["F0".to_string(), "F2".to_string()], vec!["F1".to_string(), "F3".to_string()]]
        );
        assert_eq!(report.fan_iso_classes.len(), 4);
        assert_eq!(report.complex_iso_classes.len(), 1);
        // All four complexes are squares, so no rigidity witness arises here.
        assert!(report.rigidity_witnesses.is_empty());
        assert!(!report.ring_search_exhaustive);
    }
}
