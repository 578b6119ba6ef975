//! The algebra engine: equivariant and ordinary cohomology of a toric
//! manifold as exact graded rings over the integers.
//!
//! The equivariant cohomology of the manifold of a complete non-singular fan
//! is the Stanley-Reisner ring of the underlying simplicial complex, with one
//! degree-2 generator per ray; the ordinary cohomology is its quotient by the
//! linear forms pairing the rays against a basis of the dual lattice. Every
//! graded piece is computed inside the face ring — whose monomial basis in
//! each degree consists of the monomials supported on faces — and presented
//! as an integer cokernel via Smith normal form, so all bases, products and
//! characteristic numbers are exact.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::simplicial::SimplicialComplex;
use crate::zlattice::{IntMatrix, IntVector};

/// A cohomology class: integer coordinates in the stored basis of its
/// (even, topological) degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CohClass {
    pub degree: usize,
    pub coords: Vec<BigInt>,
}

impl CohClass {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, c: &BigInt) -> CohClass {
        CohClass {
            degree: self.degree,
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &CohClass) -> CohClass {
        assert_eq!(self.degree, other.degree, "adding classes of different degrees");
        CohClass {
            degree: self.degree,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &CohClass) -> CohClass {
        self.add(&other.scale(&BigInt::from(-1)))
    }
}

/// The face-ring presentation of equivariant cohomology: one degree-2
/// generator per ray, one relation per minimal non-face, and the polynomial
/// algebra structure given by the ray vectors.
#[derive(Clone, Debug)]
pub struct EquivariantPresentation {
    pub m: usize,
    pub sr_nonfaces: Vec<Vec<usize>>,
    pub ray_vectors: Vec<IntVector>,
}

impl EquivariantPresentation {
    /// Stable text form: the face ring on generators `t1..tm` followed by the
    /// images of the dual-lattice basis under the structure map.
    pub fn to_text(&self) -> String {
        let names: Vec<String> = (1..=self.m).map(|i| format!("t{}", i)).collect();
        let relations: Vec<String> = self
            .sr_nonfaces
            .iter()
            .map(|nf| {
                let mut p = Poly::zero(self.m);
                let mut expo = vec![0u16; self.m];
                for &i in nf {
                    expo[i] += 1;
                }
                p.add_term(expo, BigInt::one());
                p.render(&names)
            })
            .collect();
        let mut out = format!("Z[{}]/({})", names.join(","), relations.join(", "));
        let n = self.ray_vectors.first().map_or(0, |r| r.len());
        for t in 0..n {
            let coeffs: Vec<BigInt> = self
                .ray_vectors
                .iter()
                .map(|ray| ray.get(t).clone())
                .collect();
            out.push_str(&format!(
                "\npi*(u{}) = {}",
                t + 1,
                render_linear(&coeffs, &names)
            ));
        }
        out
    }
}

pub fn equivariant_presentation(fan: &Fan) -> Result<EquivariantPresentation> {
    let complex = require_toric(fan)?;
    Ok(EquivariantPresentation {
        m: fan.rays().len(),
        sr_nonfaces: complex.minimal_nonfaces(),
        ray_vectors: fan.rays().to_vec(),
    })
}

/// One graded piece of the quotient ring: the face monomials spanning the
/// corresponding degree of the face ring, a canonical projection onto the
/// free quotient, and one fixed integral section of it.
struct DegreePiece {
    monomials: Vec<Vec<u16>>,
    index: HashMap<Vec<u16>, usize>,
    /// rank x #monomials; canonical (Hermite-reduced, top degree oriented
    /// so that maximal-cone monomials have coefficient +1).
    proj: IntMatrix,
    /// #monomials x rank, with proj * section = identity.
    section: IntMatrix,
    rank: usize,
}

/// The ordinary cohomology ring of a toric manifold: per-degree free bases,
/// multiplication tables, and the images of the divisor classes.
pub struct GradedRing {
    n: usize,
    m: usize,
    pieces: Vec<DegreePiece>,
    /// Key (k, l) with 1 <= k <= l, k + l <= n; entry [i][j] holds the
    /// coordinates of (basis_k[i]) * (basis_l[j]) in degree k + l.
    tables: HashMap<(usize, usize), Vec<Vec<Vec<BigInt>>>>,
    generator_images: Vec<CohClass>,
}

fn require_toric(fan: &Fan) -> Result<SimplicialComplex> {
    let report = fan.validate();
    if !(report.valid && report.complete && report.smooth) {
        return Err(Error::FanPrecondition(report.violations.join("; ")));
    }
    fan.underlying_complex()
}

/// Compute the ordinary cohomology ring of the toric manifold of `fan`.
///
/// Any torsion in a graded piece is reported as a hard error: the cohomology
/// of a toric manifold is torsion-free, so torsion certifies a bug or an
/// input that is not a complete non-singular fan.
pub fn ordinary_cohomology(fan: &Fan) -> Result<GradedRing> {
    let complex = require_toric(fan)?;
    let n = fan.dim();
    let m = fan.rays().len();

    let facet_masks: Vec<u64> = mask_facets(&complex, m)?;

    // theta[t][i] = <e_t, v_i>: the t-th linear form's coefficient on mu_i.
    let theta: Vec<Vec<BigInt>> = (0..n)
        .map(|t| fan.rays().iter().map(|r| r.get(t).clone()).collect())
        .collect();

    let mut pieces: Vec<DegreePiece> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let monomials = face_monomials(m, k, &facet_masks);
        let index: HashMap<Vec<u16>, usize> = monomials
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();

        // Degree-k part of the ideal generated by the linear forms, inside
        // the face ring: images of (face monomials of degree k-1) x (forms).
        let relation_matrix = if k == 0 {
            IntMatrix::zeros(monomials.len(), 0)
        } else {
            let prev = &pieces[k - 1];
            let mut b = IntMatrix::zeros(monomials.len(), prev.monomials.len() * n);
            for (mi, mono) in prev.monomials.iter().enumerate() {
                for (t, form) in theta.iter().enumerate() {
                    let col = mi * n + t;
                    for (i, coeff) in form.iter().enumerate() {
                        if coeff.is_zero() {
                            continue;
                        }
                        let mut prod = mono.clone();
                        prod[i] += 1;
                        if let Some(&row) = index.get(&prod) {
                            let v = b.get(row, col) + coeff;
                            b.set(row, col, v);
                        }
                    }
                }
            }
            b
        };

        let snf = relation_matrix.smith_normal_form();
        let diag = snf.diagonal();
        let torsion: Vec<String> = diag
            .iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .map(|d| format!("Z/{} in degree {}", d, 2 * k))
            .collect();
        if !torsion.is_empty() {
            return Err(Error::TorsionDetected(torsion));
        }
        let free_rows: Vec<usize> = (0..monomials.len())
            .filter(|&i| i >= diag.len() || diag[i].is_zero())
            .collect();
        let mut proj = IntMatrix::zeros(free_rows.len(), monomials.len());
        for (r, &src) in free_rows.iter().enumerate() {
            for c in 0..monomials.len() {
                proj.set(r, c, snf.u.get(src, c).clone());
            }
        }
        let (proj, _) = proj.hermite_normal_form();
        let rank = free_rows.len();
        pieces.push(DegreePiece {
            monomials,
            index,
            proj,
            section: IntMatrix::zeros(0, 0), // filled in below
            rank,
        });
    }

    // Sanity of the rank profile.
    if pieces[0].rank != 1 || pieces[n].rank != 1 {
        return Err(Error::Inconsistency(format!(
            "ranks in degrees 0 and {} are ({}, {}), expected (1, 1)",
            2 * n,
            pieces[0].rank,
            pieces[n].rank
        )));
    }
    for k in 0..=n {
        if pieces[k].rank != pieces[n - k].rank {
            return Err(Error::Inconsistency(format!(
                "rank {} in degree {} vs rank {} in degree {}",
                pieces[k].rank,
                2 * k,
                pieces[n - k].rank,
                2 * (n - k)
            )));
        }
    }

    // Orient the top degree so every maximal-cone monomial has coefficient +1.
    {
        let mut value: Option<BigInt> = None;
        for cone in fan.max_cones() {
            let mut expo = vec![0u16; m];
            for &r in cone {
                expo[r] += 1;
            }
            let idx = *pieces[n].index.get(&expo).ok_or_else(|| {
                Error::Inconsistency("maximal cone monomial missing from face basis".into())
            })?;
            let v = pieces[n].proj.get(0, idx).clone();
            match &value {
                None => value = Some(v),
                Some(prev) if *prev == v => {}
                Some(prev) => {
                    return Err(Error::Inconsistency(format!(
                        "maximal-cone monomials normalize inconsistently ({} vs {})",
                        prev, v
                    )))
                }
            }
        }
        match value {
            Some(v) if v.abs().is_one() => {
                if v.is_negative() {
                    let cols = pieces[n].monomials.len();
                    for c in 0..cols {
                        let neg = -pieces[n].proj.get(0, c);
                        pieces[n].proj.set(0, c, neg);
                    }
                }
            }
            other => {
                return Err(Error::Inconsistency(format!(
                    "maximal-cone monomial class is {:?}, expected a generator",
                    other
                )))
            }
        }
    }

    // Integral sections of the projections.
    for piece in &mut pieces {
        piece.section = section_of(&piece.proj)?;
    }

    // Multiplication tables between positive degrees.
    let mut tables = HashMap::new();
    for k in 1..=n {
        for l in k..=n {
            if k + l > n {
                break;
            }
            let mut table = Vec::with_capacity(pieces[k].rank);
            for i in 0..pieces[k].rank {
                let lift_i = lift_column(&pieces[k], i);
                let mut row = Vec::with_capacity(pieces[l].rank);
                for j in 0..pieces[l].rank {
                    let lift_j = lift_column(&pieces[l], j);
                    let prod =
                        multiply_face_polys(&pieces[k + l], &pieces[k], &lift_i, &pieces[l], &lift_j);
                    row.push(project(&pieces[k + l], &prod));
                }
                table.push(row);
            }
            tables.insert((k, l), table);
        }
    }

    let generator_images = (0..m)
        .map(|i| {
            let mut expo = vec![0u16; m];
            expo[i] = 1;
            let idx = pieces[1].index[&expo];
            CohClass {
                degree: 2,
                coords: (0..pieces[1].rank)
                    .map(|r| pieces[1].proj.get(r, idx).clone())
                    .collect(),
            }
        })
        .collect();

    Ok(GradedRing { n, m, pieces, tables, generator_images })
}

fn mask_facets(complex: &SimplicialComplex, m: usize) -> Result<Vec<u64>> {
    if m > 64 {
        return Err(Error::InvalidParameter(
            "fans with more than 64 rays are not supported".into(),
        ));
    }
    Ok(complex
        .facets()
        .iter()
        .map(|f| f.iter().fold(0u64, |acc, &v| acc | (1 << v)))
        .collect())
}

/// All degree-`k` monomials in `m` variables whose support is a face, in
/// descending lexicographic order of exponent vectors, so in degree one the
/// monomials appear in variable order.
fn face_monomials(m: usize, k: usize, facet_masks: &[u64]) -> Vec<Vec<u16>> {
    fn go(
        var: usize,
        remaining: u16,
        mask: u64,
        m: usize,
        expo: &mut Vec<u16>,
        facet_masks: &[u64],
        out: &mut Vec<Vec<u16>>,
    ) {
        if !facet_masks.iter().any(|f| mask & !f == 0) {
            return;
        }
        if var == m {
            if remaining == 0 {
                out.push(expo.clone());
            }
            return;
        }
        for e in (0..=remaining).rev() {
            expo[var] = e;
            let new_mask = if e > 0 { mask | (1 << var) } else { mask };
            go(var + 1, remaining - e, new_mask, m, expo, facet_masks, out);
        }
        expo[var] = 0;
    }
    let mut out = Vec::new();
    let mut expo = vec![0u16; m];
    go(0, k as u16, 0, m, &mut expo, facet_masks, &mut out);
    out
}

/// An integral right inverse of a surjective projection, via Smith normal form.
fn section_of(proj: &IntMatrix) -> Result<IntMatrix> {
    let b = proj.rows();
    let cols = proj.cols();
    let snf = proj.smith_normal_form();
    let diag = snf.diagonal();
    if diag.len() != b || diag.iter().any(|d| !d.is_one()) {
        return Err(Error::Inconsistency(
            "graded-piece projection is not surjective".into(),
        ));
    }
    // With U*P*V = [I | 0]:  P * (V * [U; 0]) = U^{-1} [I|0] [U;0] = I.
    let mut stacked = IntMatrix::zeros(cols, b);
    for r in 0..b {
        for c in 0..b {
            stacked.set(r, c, snf.u.get(r, c).clone());
        }
    }
    let section = snf.v.mul(&stacked).expect("shape");
    #[cfg(debug_assertions)]
    {
        let check = proj.mul(&section).expect("shape");
        debug_assert_eq!(check, IntMatrix::identity(b));
    }
    Ok(section)
}

/// Dense face-ring representative of the `i`-th basis class of a piece.
fn lift_column(piece: &DegreePiece, i: usize) -> Vec<BigInt> {
    (0..piece.monomials.len())
        .map(|r| piece.section.get(r, i).clone())
        .collect()
}

/// Product of two face polynomials, reduced into the face basis of the
/// target degree (monomials with non-face support vanish in the face ring).
fn multiply_face_polys(
    target: &DegreePiece,
    a_piece: &DegreePiece,
    a: &[BigInt],
    b_piece: &DegreePiece,
    b: &[BigInt],
) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); target.monomials.len()];
    for (ia, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        let mono_a = &a_piece.monomials[ia];
        for (ib, cb) in b.iter().enumerate() {
            if cb.is_zero() {
                continue;
            }
            let mono_b = &b_piece.monomials[ib];
            let prod: Vec<u16> = mono_a.iter().zip(mono_b).map(|(x, y)| x + y).collect();
            if let Some(&idx) = target.index.get(&prod) {
                out[idx] += ca * cb;
            }
        }
    }
    out
}

fn project(piece: &DegreePiece, dense: &[BigInt]) -> Vec<BigInt> {
    (0..piece.rank)
        .map(|r| {
            dense
                .iter()
                .enumerate()
                .map(|(c, v)| piece.proj.get(r, c) * v)
                .sum()
        })
        .collect()
}

impl GradedRing {
    /// Complex dimension: the top nonzero degree is `2n`.
    pub fn complex_dim(&self) -> usize {
        self.n
    }

    /// Number of ring generators (rays of the source fan).
    pub fn generator_count(&self) -> usize {
        self.m
    }

    /// Rank of the degree-`2k` piece.
    pub fn rank(&self, k: usize) -> usize {
        self.pieces.get(k).map_or(0, |p| p.rank)
    }

    /// Ranks `b_0, b_2, ..., b_{2n}`.
    pub fn betti_numbers(&self) -> Vec<usize> {
        (0..=self.n).map(|k| self.pieces[k].rank).collect()
    }

    /// The face monomials spanning the degree-`2k` face-ring piece.
    pub fn monomial_basis(&self, k: usize) -> &[Vec<u16>] {
        &self.pieces[k].monomials
    }

    pub fn zero_class(&self, degree: usize) -> Result<CohClass> {
        let k = self.check_degree(degree)?;
        Ok(CohClass {
            degree,
            coords: vec![BigInt::zero(); self.pieces[k].rank],
        })
    }

    pub fn unit(&self) -> CohClass {
        CohClass {
            degree: 0,
            coords: vec![BigInt::one()],
        }
    }

    pub fn class_from_coords(&self, degree: usize, coords: Vec<BigInt>) -> Result<CohClass> {
        let k = self.check_degree(degree)?;
        if coords.len() != self.pieces[k].rank {
            return Err(Error::DimensionMismatch {
                expected: self.pieces[k].rank,
                got: coords.len(),
            });
        }
        Ok(CohClass { degree, coords })
    }

    fn check_degree(&self, degree: usize) -> Result<usize> {
        if degree % 2 != 0 || degree / 2 > self.n {
            return Err(Error::DegreeOverflow(degree, 2 * self.n));
        }
        Ok(degree / 2)
    }

    /// The divisor class of ray `i`.
    pub fn generator_image(&self, i: usize) -> &CohClass {
        &self.generator_images[i]
    }

    /// Class of a face-ring monomial given by its exponent vector over the
    /// generators. Monomials with non-face support are zero.
    pub fn class_of_monomial(&self, expo: &[u16]) -> Result<CohClass> {
        if expo.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                got: expo.len(),
            });
        }
        let k: usize = expo.iter().map(|&e| e as usize).sum();
        if k > self.n {
            return Err(Error::DegreeOverflow(2 * k, 2 * self.n));
        }
        let piece = &self.pieces[k];
        match piece.index.get(expo) {
            None => self.zero_class(2 * k),
            Some(&idx) => Ok(CohClass {
                degree: 2 * k,
                coords: (0..piece.rank).map(|r| piece.proj.get(r, idx).clone()).collect(),
            }),
        }
    }

    /// Class of the product of the divisors of `rays` (repetition allowed).
    pub fn divisor_product(&self, rays: &[usize]) -> Result<CohClass> {
        let mut expo = vec![0u16; self.m];
        for &r in rays {
            if r >= self.m {
                return Err(Error::InvalidParameter(format!("no ray {}", r)));
            }
            expo[r] += 1;
        }
        self.class_of_monomial(&expo)
    }

    /// A face-ring representative of a class, as (exponent vector, coefficient)
    /// pairs. Projecting it back yields the class again.
    pub fn lift(&self, class: &CohClass) -> Result<Vec<(Vec<u16>, BigInt)>> {
        let k = self.check_degree(class.degree)?;
        let piece = &self.pieces[k];
        if class.coords.len() != piece.rank {
            return Err(Error::DimensionMismatch {
                expected: piece.rank,
                got: class.coords.len(),
            });
        }
        let mut dense = vec![BigInt::zero(); piece.monomials.len()];
        for (i, c) in class.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for r in 0..piece.monomials.len() {
                dense[r] += piece.section.get(r, i) * c;
            }
        }
        Ok(dense
            .into_iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (piece.monomials[i].clone(), v))
            .collect())
    }

    /// Cup product via the stored multiplication tables.
    pub fn cup(&self, a: &CohClass, b: &CohClass) -> Result<CohClass> {
        let k = self.check_degree(a.degree)?;
        let l = self.check_degree(b.degree)?;
        if k + l > self.n {
            return Err(Error::DegreeOverflow(a.degree + b.degree, 2 * self.n));
        }
        if k == 0 {
            return Ok(b.scale(&a.coords[0]));
        }
        if l == 0 {
            return Ok(a.scale(&b.coords[0]));
        }
        let (x, y, kk, ll) = if k <= l { (a, b, k, l) } else { (b, a, l, k) };
        let table = &self.tables[&(kk, ll)];
        let mut coords = vec![BigInt::zero(); self.pieces[k + l].rank];
        for (i, ci) in x.coords.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (j, cj) in y.coords.iter().enumerate() {
                if cj.is_zero() {
                    continue;
                }
                let prod = &table[i][j];
                let scale = ci * cj;
                for (t, v) in prod.iter().enumerate() {
                    coords[t] += v * &scale;
                }
            }
        }
        Ok(CohClass { degree: a.degree + b.degree, coords })
    }

    /// Pairing with the fundamental class, normalized so the product of the
    /// divisors of any maximal cone integrates to +1.
    pub fn integrate(&self, top: &CohClass) -> Result<BigInt> {
        if top.degree != 2 * self.n {
            return Err(Error::InvalidParameter(format!(
                "integrate needs a degree-{} class, got degree {}",
                2 * self.n,
                top.degree
            )));
        }
        Ok(top.coords[0].clone())
    }

    /// Graded components `c_1..c_n` of the total Chern class, the product of
    /// `(1 + mu_i)` over all divisor classes.
    pub fn chern_classes(&self) -> Vec<CohClass> {
        self.multiplicative_expansion(1)
    }

    /// Graded components `p_1..p_{n/2}` of the total Pontrjagin class, the
    /// product of `(1 + mu_i^2)`.
    pub fn pontrjagin_classes(&self) -> Vec<CohClass> {
        self.multiplicative_expansion(2)
    }

    /// Expand the product over all generators of `(1 + x_i^power)` in the
    /// face ring and project each graded component.
    fn multiplicative_expansion(&self, power: usize) -> Vec<CohClass> {
        let n = self.n;
        let mut state: Vec<Vec<BigInt>> = (0..=n)
            .map(|k| vec![BigInt::zero(); self.pieces[k].monomials.len()])
            .collect();
        state[0][0] = BigInt::one();
        for i in 0..self.m {
            for d in (power..=n).rev() {
                let (lower, upper) = state.split_at_mut(d);
                let src = &lower[d - power];
                let dst = &mut upper[0];
                for (mi, c) in src.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mut expo = self.pieces[d - power].monomials[mi].clone();
                    expo[i] += power as u16;
                    if let Some(&idx) = self.pieces[d].index.get(&expo) {
                        dst[idx] += c;
                    }
                }
            }
        }
        (1..=n / power)
            .map(|k| CohClass {
                degree: 2 * power * k,
                coords: project(&self.pieces[power * k], &state[power * k]),
            })
            .collect()
    }
}

/// Total Chern class components of the manifold of `fan`, in the ring `r`.
pub fn total_chern(fan: &Fan, r: &GradedRing) -> Result<Vec<CohClass>> {
    check_ring_matches(fan, r)?;
    Ok(r.chern_classes())
}

/// Total Pontrjagin class components of the manifold of `fan`, in the ring `r`.
pub fn total_pontrjagin(fan: &Fan, r: &GradedRing) -> Result<Vec<CohClass>> {
    check_ring_matches(fan, r)?;
    Ok(r.pontrjagin_classes())
}

fn check_ring_matches(fan: &Fan, r: &GradedRing) -> Result<()> {
    if fan.rays().len() != r.generator_count() || fan.dim() != r.complex_dim() {
        return Err(Error::InvalidParameter(
            "ring was not computed from this fan".into(),
        ));
    }
    Ok(())
}

/// Recover the face-count vector from the even Betti numbers: `f_i` is the
/// coefficient of `s^(n-i-1)` in `sum_k b_{2k} (s+1)^(n-k)`.
pub fn f_from_betti(betti: &[usize], n: usize) -> Result<Vec<usize>> {
    if betti.len() != n + 1 {
        return Err(Error::InvalidParameter(format!(
            "need {} Betti numbers for dimension {}, got {}",
            n + 1,
            n,
            betti.len()
        )));
    }
    let mut f = vec![0usize; n];
    for i in 0..n {
        let j = n - i - 1;
        f[i] = (0..=n).map(|k| betti[k] * binomial(n - k, j)).sum();
    }
    Ok(f)
}

fn binomial(a: usize, b: usize) -> usize {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut out = 1usize;
    for i in 0..b {
        out = out * (a - i) / (i + 1);
    }
    out
}

/// Ordinary cohomology in eliminated form: the divisor classes of one
/// distinguished maximal cone are rewritten in the surviving generators, so
/// the ring prints as `Z[generators]/(relations)`.
#[derive(Clone, Debug)]
pub struct OrdinaryPresentation {
    pub generator_names: Vec<String>,
    /// Ray index (0-based) behind each printed generator.
    pub surviving_rays: Vec<usize>,
    pub relations: Vec<String>,
    pub text: String,
}

/// Eliminate the divisors of the lexicographically largest maximal cone
/// using the linear relations; the cone's ray matrix is unimodular for a
/// smooth fan, so the elimination is integral. With the Bott-tower ray
/// convention this reproduces the textbook forms, e.g. `Z[x]/(x^(n+1))` for
/// projective space and `Z[x,y]/(x^2, y^2+a*xy)` for a Hirzebruch surface.
pub fn ordinary_presentation(fan: &Fan) -> Result<OrdinaryPresentation> {
    let complex = require_toric(fan)?;
    let n = fan.dim();
    let m = fan.rays().len();
    let eliminated: Vec<usize> = fan
        .max_cones()
        .iter()
        .max()
        .cloned()
        .ok_or_else(|| Error::Inconsistency("no maximal cones".into()))?;
    let survivors: Vec<usize> = (0..m).filter(|i| !eliminated.contains(i)).collect();
    let g = survivors.len();

    let cone_matrix = fan.cone_matrix(&eliminated);
    let det = cone_matrix.det()?;
    if !det.abs().is_one() {
        return Err(Error::Inconsistency(
            "distinguished maximal cone is not unimodular".into(),
        ));
    }
    // mu_eliminated = -(V_cone^{-1} V_rest) mu_survivors; inverse = det * adjugate.
    let rest = IntMatrix::from_cols(
        &survivors.iter().map(|&i| fan.ray(i)).collect::<Vec<_>>(),
        n,
    );
    let mut subst = cone_matrix.adjugate()?.mul(&rest)?;
    for r in 0..subst.rows() {
        for c in 0..subst.cols() {
            let v = -(subst.get(r, c) * &det);
            subst.set(r, c, v);
        }
    }

    // Linear polynomial for each generator: survivors map to themselves.
    let linear: Vec<Poly> = (0..m)
        .map(|i| {
            let mut p = Poly::zero(g);
            if let Some(pos) = survivors.iter().position(|&s| s == i) {
                let mut expo = vec![0u16; g];
                expo[pos] = 1;
                p.add_term(expo, BigInt::one());
            } else {
                let row = eliminated.iter().position(|&s| s == i).expect("eliminated");
                for (col, _) in survivors.iter().enumerate() {
                    let c = subst.get(row, col).clone();
                    if !c.is_zero() {
                        let mut expo = vec![0u16; g];
                        expo[col] = 1;
                        p.add_term(expo, c);
                    }
                }
            }
            p
        })
        .collect();

    let names = generator_names(g);
    let mut rendered: Vec<(usize, String)> = complex
        .minimal_nonfaces()
        .iter()
        .map(|nf| {
            let mut p = Poly::one(g);
            for &i in nf {
                p = p.mul(&linear[i]);
            }
            p.normalize_sign();
            (nf.len(), p.render(&names))
        })
        .collect();
    rendered.sort();
    let relations: Vec<String> = rendered.into_iter().map(|(_, s)| s).collect();
    let text = format!("Z[{}]/({})", names.join(","), relations.join(", "));
    Ok(OrdinaryPresentation {
        generator_names: names,
        surviving_rays: survivors,
        relations,
        text,
    })
}

/// Render a linear form in generator order, e.g. `t2+2*t3-t4`.
fn render_linear(coeffs: &[BigInt], names: &[String]) -> String {
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else if c.is_negative() {
            out.push('-');
        } else {
            out.push('+');
        }
        let abs = c.abs();
        if abs.is_one() {
            out.push_str(&names[i]);
        } else {
            out.push_str(&format!("{}*{}", abs, names[i]));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn generator_names(g: usize) -> Vec<String> {
    match g {
        1 => vec!["x".into()],
        2 => vec!["x".into(), "y".into()],
        3 => vec!["x".into(), "y".into(), "z".into()],
        _ => (1..=g).map(|i| format!("x{}", i)).collect(),
    }
}

/// A multivariate integer polynomial with a stable term order (ascending
/// lexicographic exponent vectors), used only for printing presentations.
struct Poly {
    vars: usize,
    terms: BTreeMap<Vec<u16>, BigInt>,
}

impl Poly {
    fn zero(vars: usize) -> Self {
        Poly { vars, terms: BTreeMap::new() }
    }

    fn one(vars: usize) -> Self {
        let mut p = Poly::zero(vars);
        p.add_term(vec![0; vars], BigInt::one());
        p
    }

    fn add_term(&mut self, expo: Vec<u16>, coeff: BigInt) {
        debug_assert_eq!(expo.len(), self.vars);
        let entry = self.terms.entry(expo).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            let key: Vec<Vec<u16>> = self
                .terms
                .iter()
                .filter(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in key {
                self.terms.remove(&k);
            }
        }
    }

    fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let expo: Vec<u16> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(expo, ca * cb);
            }
        }
        out
    }

    fn normalize_sign(&mut self) {
        if let Some((_, c)) = self.terms.iter().next() {
            if c.is_negative() {
                for v in self.terms.values_mut() {
                    *v = -&*v;
                }
            }
        }
    }

    fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let single_char = names.iter().all(|n| n.len() == 1);
        let mut out = String::new();
        for (i, (expo, coeff)) in self.terms.iter().enumerate() {
            let mono = {
                let mut parts = Vec::new();
                for (v, &e) in expo.iter().enumerate() {
                    if e == 1 {
                        parts.push(names[v].clone());
                    } else if e > 1 {
                        parts.push(format!("{}^{}", names[v], e));
                    }
                }
                if single_char {
                    parts.join("")
                } else {
                    parts.join("*")
                }
            };
            let abs = coeff.abs();
            let body = if mono.is_empty() {
                abs.to_string()
            } else if abs.is_one() {
                mono
            } else if single_char {
                format!("{}{}", abs, mono)
            } else {
                format!("{}*{}", abs, mono)
            };
            if i == 0 {
                if coeff.is_negative() {
                    out.push('-');
                }
            } else if coeff.is_negative() {
                out.push('-');
            } else {
                out.push('+');
            }
            out.push_str(&body);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{cp2_times_cp1, hirzebruch, projective_space};

    #[test]
    fn cp_n_is_truncated_polynomial_ring() {
        for n in 1..=4 {
            let fan = projective_space(n).unwrap();
            let ring = ordinary_cohomology(&fan).unwrap();
            assert_eq!(ring.betti_numbers(), vec![1; n + 1]);
            let x = ring.generator_image(0).clone();
            let mut power = ring.unit();
            for _ in 0..n {
                power = ring.cup(&power, &x).unwrap();
            }
            assert_eq!(ring.integrate(&power).unwrap(), BigInt::one());
            // One more power overflows the top degree.
            assert!(ring.cup(&power, &x).is_err());
        }
    }

    #[test]
    fn hirzebruch_relations_pin_the_twist_sign() {
        for a in -3..=3i64 {
            let ring = ordinary_cohomology(&hirzebruch(a)).unwrap();
            assert_eq!(ring.betti_numbers(), vec![1, 2, 1]);
            let x = ring.generator_image(0).clone();
            let y = ring.generator_image(1).clone();
            let xx = ring.cup(&x, &x).unwrap();
            assert!(xx.is_zero(), "x^2 = 0");
            let yy = ring.cup(&y, &y).unwrap();
            let xy = ring.cup(&x, &y).unwrap();
            assert_eq!(yy, xy.scale(&BigInt::from(-a)), "y^2 = -a*xy");
            assert_eq!(ring.integrate(&xy).unwrap(), BigInt::one());
        }
    }

    #[test]
    fn hirzebruch_presentations() {
        assert_eq!(
            ordinary_presentation(&hirzebruch(1)).unwrap().text,
            "Z[x,y]/(x^2, y^2+xy)"
        );
        assert_eq!(
            ordinary_presentation(&hirzebruch(0)).unwrap().text,
            "Z[x,y]/(x^2, y^2)"
        );
        assert_eq!(
            ordinary_presentation(&hirzebruch(-2)).unwrap().text,
            "Z[x,y]/(x^2, y^2-2xy)"
        );
        assert_eq!(
            ordinary_presentation(&projective_space(2).unwrap()).unwrap().text,
            "Z[x]/(x^3)"
        );
        assert_eq!(
            ordinary_presentation(&projective_space(1).unwrap()).unwrap().text,
            "Z[x]/(x^2)"
        );
    }

    #[test]
    fn equivariant_presentation_of_hirzebruch() {
        let p = equivariant_presentation(&hirzebruch(2)).unwrap();
        assert_eq!(p.m, 4);
        assert_eq!(p.sr_nonfaces, vec![vec![0, 2], vec![1, 3]]);
        let text = p.to_text();
        assert!(text.starts_with("Z[t1,t2,t3,t4]/(t1*t3, t2*t4)"), "{}", text);
        assert!(text.contains("pi*(u1) = t1-t3"), "{}", text);
        assert!(text.contains("pi*(u2) = t2+2*t3-t4"), "{}", text);
    }

    #[test]
    fn betti_of_products() {
        let ring = ordinary_cohomology(&cp2_times_cp1()).unwrap();
        assert_eq!(ring.betti_numbers(), vec![1, 2, 2, 1]);
    }

    #[test]
    fn f_vector_from_betti_examples() {
        assert_eq!(f_from_betti(&[1, 1, 1], 2).unwrap(), vec![3, 3]);
        assert_eq!(f_from_betti(&[1, 2, 1], 2).unwrap(), vec![4, 4]);
        assert_eq!(f_from_betti(&[1, 1], 1).unwrap(), vec![2]);
        assert!(f_from_betti(&[1, 1], 2).is_err());
    }

    #[test]
    fn chern_and_pontrjagin_of_cp2() {
        let fan = projective_space(2).unwrap();
        let ring = ordinary_cohomology(&fan).unwrap();
        let c = total_chern(&fan, &ring).unwrap();
        assert_eq!(c.len(), 2);
        let x = ring.generator_image(0).clone();
        assert_eq!(c[0], x.scale(&BigInt::from(3)), "c_1 = 3x");
        assert_eq!(ring.integrate(&c[1]).unwrap(), BigInt::from(3), "c_2 counts fixed points");

        let p = total_pontrjagin(&fan, &ring).unwrap();
        assert_eq!(p.len(), 1);
        let xx = ring.cup(&x, &x).unwrap();
        assert_eq!(p[0], xx.scale(&BigInt::from(3)), "p_1 = 3x^2");
        assert_eq!(ring.integrate(&p[0]).unwrap(), BigInt::from(3));
    }

    #[test]
    fn hirzebruch_characteristic_numbers() {
        for a in -2..=2i64 {
            let fan = hirzebruch(a);
            let ring = ordinary_cohomology(&fan).unwrap();
            let c = ring.chern_classes();
            assert_eq!(ring.integrate(&c[1]).unwrap(), BigInt::from(4));
            let p = ring.pontrjagin_classes();
            assert_eq!(ring.integrate(&p[0]).unwrap(), BigInt::zero(), "signature 0");
        }
    }

    #[test]
    fn cp1_has_no_pontrjagin_classes() {
        let ring = ordinary_cohomology(&projective_space(1).unwrap()).unwrap();
        assert!(ring.pontrjagin_classes().is_empty());
    }

    #[test]
    fn integrate_normalization_across_cones() {
        let fan = hirzebruch(3);
        let ring = ordinary_cohomology(&fan).unwrap();
        for cone in fan.max_cones() {
            let class = ring.divisor_product(cone).unwrap();
            assert_eq!(ring.integrate(&class).unwrap(), BigInt::one());
        }
        let zero = ring.zero_class(4).unwrap();
        assert_eq!(ring.integrate(&zero).unwrap(), BigInt::zero());
    }

    #[test]
    fn rejects_fans_that_are_not_toric_manifolds() {
        let f = crate::fan::Fan::new(
            2,
            vec![IntVector::from_i64(&[1, 0]), IntVector::from_i64(&[0, 1])],
            vec![vec![0, 1]],
        );
        assert!(matches!(
            ordinary_cohomology(&f),
            Err(Error::FanPrecondition(_))
        ));
    }
}
