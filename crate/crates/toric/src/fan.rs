//! Complete non-singular fans and constructors for the standard families.
//!
//! A fan is stored as its primitive ray vectors together with its maximal
//! cones, each a set of ray indices. Only simplicial fans whose maximal cones
//! are full-dimensional are representable, which covers every non-singular
//! complete fan.

use std::collections::{BTreeMap, HashMap, HashSet};

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplicial::SimplicialComplex;
use crate::zlattice::{number_to_bigint, IntMatrix, IntVector};

/// A simplicial fan: `dim`-dimensional lattice, rays, and maximal cones given
/// as sorted lists of 0-based ray indices.
///
/// Construction does not validate; [`Fan::validate`] reports every defect
/// instead of panicking, so malformed input files can be diagnosed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Fan {
    dim: usize,
    rays: Vec<IntVector>,
    max_cones: Vec<Vec<usize>>,
}

/// Outcome of fan validation. `violations` is empty exactly when all three
/// flags are true.
#[derive(Clone, Debug, Serialize)]
pub struct FanReport {
    pub valid: bool,
    pub complete: bool,
    pub smooth: bool,
    pub violations: Vec<String>,
}

impl Fan {
    /// Ray order is significant (it labels the divisor classes); the maximal
    /// cone list is canonicalized to sorted order, inside each cone and
    /// across cones.
    pub fn new(dim: usize, rays: Vec<IntVector>, max_cones: Vec<Vec<usize>>) -> Self {
        let mut max_cones: Vec<Vec<usize>> = max_cones
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        max_cones.sort();
        Fan { dim, rays, max_cones }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[IntVector] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &IntVector {
        &self.rays[i]
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    /// Matrix whose columns are the rays of `cone`.
    pub fn cone_matrix(&self, cone: &[usize]) -> IntMatrix {
        let cols: Vec<&IntVector> = cone.iter().map(|&i| &self.rays[i]).collect();
        IntMatrix::from_cols(&cols, self.dim)
    }

    /// Check the fan axioms, completeness and smoothness, reporting every
    /// violation found. Malformed index data becomes a violation, never a
    /// panic.
    pub fn validate(&self) -> FanReport {
        let mut violations = Vec::new();

        // Ray-level checks.
        let mut seen: HashMap<&IntVector, usize> = HashMap::new();
        for (i, ray) in self.rays.iter().enumerate() {
            if ray.len() != self.dim {
                violations.push(format!(
                    "ray {} has {} coordinates, expected {}",
                    i + 1,
                    ray.len(),
                    self.dim
                ));
                continue;
            }
            if !ray.is_primitive() {
                violations.push(format!("ray {} = {} is not primitive", i + 1, ray));
            }
            if let Some(&j) = seen.get(ray) {
                violations.push(format!("rays {} and {} coincide", j + 1, i + 1));
            } else {
                seen.insert(ray, i);
            }
        }

        // Cone-level structural checks.
        let mut used = vec![false; self.rays.len()];
        let mut cone_ok = vec![true; self.max_cones.len()];
        let mut cone_seen: HashMap<&[usize], usize> = HashMap::new();
        for (ci, cone) in self.max_cones.iter().enumerate() {
            if cone.len() != self.dim {
                violations.push(format!(
                    "max cone {} has {} rays, expected {}",
                    ci + 1,
                    cone.len(),
                    self.dim
                ));
                cone_ok[ci] = false;
            }
            if cone.windows(2).any(|w| w[0] == w[1]) {
                violations.push(format!("max cone {} repeats a ray index", ci + 1));
                cone_ok[ci] = false;
            }
            for &r in cone {
                if r >= self.rays.len() {
                    violations.push(format!(
                        "max cone {} references ray {} but there are only {} rays",
                        ci + 1,
                        r + 1,
                        self.rays.len()
                    ));
                    cone_ok[ci] = false;
                } else {
                    used[r] = true;
                    if self.rays[r].len() != self.dim {
                        cone_ok[ci] = false;
                    }
                }
            }
            if cone_ok[ci] {
                if let Some(&cj) = cone_seen.get(cone.as_slice()) {
                    violations.push(format!("max cones {} and {} coincide", cj + 1, ci + 1));
                    cone_ok[ci] = false;
                } else {
                    cone_seen.insert(cone, ci);
                }
            }
        }
        if self.max_cones.is_empty() {
            violations.push("fan has no maximal cones".into());
        }
        for (r, u) in used.iter().enumerate() {
            if !u {
                violations.push(format!("ray {} lies in no maximal cone", r + 1));
            }
        }

        // Full-dimensionality of each well-formed cone.
        let mut dets: Vec<Option<BigInt>> = vec![None; self.max_cones.len()];
        for (ci, cone) in self.max_cones.iter().enumerate() {
            if !cone_ok[ci] {
                continue;
            }
            let det = self.cone_matrix(cone).det().expect("square by check");
            if det.is_zero() {
                violations.push(format!("max cone {} has linearly dependent rays", ci + 1));
                cone_ok[ci] = false;
            } else {
                dets[ci] = Some(det);
            }
        }

        // Pairwise proper intersection: cone(s) and cone(t) must meet exactly
        // in the cone on their shared rays. Decided by exact rational
        // feasibility via Fourier-Motzkin elimination.
        for (a, b) in (0..self.max_cones.len()).tuple_combinations() {
            if !cone_ok[a] || !cone_ok[b] {
                continue;
            }
            if let Some(witness) = self.improper_pair(
                &self.max_cones[a],
                dets[a].as_ref().unwrap(),
                &self.max_cones[b],
            ) {
                violations.push(format!(
                    "max cones {} and {} intersect improperly (ray {} of cone {} meets the overlap)",
                    a + 1,
                    b + 1,
                    witness + 1,
                    a + 1
                ));
            }
        }

        let valid = violations.is_empty();
        let complete = valid && self.is_complete();
        let smooth = valid && self.is_smooth();
        if valid && !complete {
            violations
                .push(self.completeness_defect().unwrap_or_else(|| "fan is not complete".into()));
        }
        if valid && !smooth {
            for (ci, det) in dets.iter().enumerate() {
                if let Some(d) = det {
                    if !d.abs().is_one() {
                        violations.push(format!(
                            "max cone {} is singular (determinant {})",
                            ci + 1,
                            d
                        ));
                    }
                }
            }
        }
        FanReport { valid, complete, smooth, violations }
    }

    /// If `cone(a) ∩ cone(b)` is strictly larger than the cone on the shared
    /// rays, return a ray of `a` witnessing it. Writing points of the overlap
    /// in the (unique) coordinates of `a`'s independent rays, the pair is
    /// improper exactly when some coordinate outside the shared rays can be
    /// made positive.
    fn improper_pair(&self, a: &[usize], det_a: &BigInt, b: &[usize]) -> Option<usize> {
        if a == b {
            return None;
        }
        let shared: HashSet<usize> = a.iter().copied().filter(|r| b.contains(r)).collect();
        let mat_a = self.cone_matrix(a);
        let mat_b = self.cone_matrix(b);
        let adj = mat_a.adjugate().expect("square");
        // lambda = A^{-1} B mu, scaled by |det A|: row i of `scaled` is the
        // integer form |det A| * lambda_i in the variables mu.
        let mut scaled = adj.mul(&mat_b).expect("shape");
        if det_a.is_negative() {
            for r in 0..scaled.rows() {
                for c in 0..scaled.cols() {
                    let v = -scaled.get(r, c);
                    scaled.set(r, c, v);
                }
            }
        }
        let abs_det = det_a.abs();
        let nb = b.len();
        for (pos, &ray) in a.iter().enumerate() {
            if shared.contains(&ray) {
                continue;
            }
            // Feasibility of: mu >= 0, lambda >= 0, lambda_pos >= 1.
            let mut rows: Vec<Vec<BigInt>> = Vec::new();
            for j in 0..nb {
                let mut row = vec![BigInt::zero(); nb + 1];
                row[j] = BigInt::one();
                rows.push(row);
            }
            for i in 0..a.len() {
                let mut row: Vec<BigInt> = scaled.row(i).to_vec();
                row.push(BigInt::zero());
                rows.push(row);
            }
            let mut target: Vec<BigInt> = scaled.row(pos).to_vec();
            target.push(-abs_det.clone());
            rows.push(target);
            if fourier_motzkin_feasible(rows, nb) {
                return Some(ray);
            }
        }
        None
    }

    /// Completeness test for a fan that has passed proper-intersection
    /// validation.
    ///
    /// A valid finite simplicial fan of full-dimensional cones covers all of
    /// R^n iff (a) every wall — a codimension-one face of a maximal cone —
    /// lies in exactly two maximal cones, which sit on strictly opposite
    /// sides of the wall's hyperplane, and (b) the graph of maximal cones
    /// glued along walls is connected. Sketch: under (a) the support has no
    /// topological boundary, because a boundary point of the support can be
    /// perturbed into the relative interior of some wall, where the fan would
    /// lie on one side only; a closed set that is the union of finitely many
    /// full-dimensional cones and has empty boundary is all of R^n or splits
    /// off a separate component, and (b) rules the latter out.
    pub fn is_complete(&self) -> bool {
        self.completeness_defect().is_none()
    }

    fn completeness_defect(&self) -> Option<String> {
        if self.dim == 0 {
            return if self.max_cones == vec![Vec::<usize>::new()] {
                None
            } else {
                Some("a zero-dimensional fan must consist of the origin cone alone".into())
            };
        }
        // wall -> list of (cone index, the ray of the cone not on the wall)
        let mut walls: BTreeMap<Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();
        for (ci, cone) in self.max_cones.iter().enumerate() {
            for skip in 0..cone.len() {
                let mut wall = cone.clone();
                let extra = wall.remove(skip);
                walls.entry(wall).or_default().push((ci, extra));
            }
        }
        let mut uf = UnionFind::new(self.max_cones.len());
        for (wall, cones) in &walls {
            if cones.len() != 2 {
                return Some(format!(
                    "wall {:?} lies in {} maximal cone(s), expected 2",
                    wall.iter().map(|r| r + 1).collect::<Vec<_>>(),
                    cones.len()
                ));
            }
            let mat = if wall.is_empty() {
                IntMatrix::zeros(0, self.dim)
            } else {
                let rows: Vec<Vec<BigInt>> = wall
                    .iter()
                    .map(|&r| self.rays[r].entries().to_vec())
                    .collect();
                IntMatrix::from_rows(rows).expect("rectangular")
            };
            let kernel = mat.kernel();
            if kernel.len() != 1 {
                return Some(format!(
                    "wall {:?} does not span a hyperplane",
                    wall.iter().map(|r| r + 1).collect::<Vec<_>>()
                ));
            }
            let normal = &kernel[0];
            let s0 = self.rays[cones[0].1].dot(normal).sign();
            let s1 = self.rays[cones[1].1].dot(normal).sign();
            let opposite = (s0 == num_bigint::Sign::Plus && s1 == num_bigint::Sign::Minus)
                || (s0 == num_bigint::Sign::Minus && s1 == num_bigint::Sign::Plus);
            if !opposite {
                return Some(format!(
                    "maximal cones {} and {} do not lie on opposite sides of wall {:?}",
                    cones[0].0 + 1,
                    cones[1].0 + 1,
                    wall.iter().map(|r| r + 1).collect::<Vec<_>>()
                ));
            }
            uf.union(cones[0].0, cones[1].0);
        }
        if (1..self.max_cones.len()).any(|c| uf.find(c) != uf.find(0)) {
            return Some("the wall-adjacency graph of maximal cones is disconnected".into());
        }
        None
    }

    /// True iff the rays of every maximal cone form a basis of Z^n.
    pub fn is_smooth(&self) -> bool {
        self.max_cones.iter().all(|cone| {
            cone.len() == self.dim
                && cone
                    .iter()
                    .all(|&r| r < self.rays.len() && self.rays[r].len() == self.dim)
                && self
                    .cone_matrix(cone)
                    .det()
                    .map(|d| d.abs().is_one())
                    .unwrap_or(false)
        })
    }

    /// The underlying simplicial complex: ray index sets spanning cones.
    pub fn underlying_complex(&self) -> Result<SimplicialComplex> {
        SimplicialComplex::new(self.rays.len(), self.max_cones.clone())
    }

    /// Product fan on the direct sum of the two lattices.
    pub fn product(&self, other: &Fan) -> Fan {
        let dim = self.dim + other.dim;
        let mut rays = Vec::with_capacity(self.rays.len() + other.rays.len());
        for r in &self.rays {
            let mut e = r.entries().to_vec();
            e.extend(std::iter::repeat_with(BigInt::zero).take(other.dim));
            rays.push(IntVector::new(e));
        }
        for r in &other.rays {
            let mut e = vec![BigInt::zero(); self.dim];
            e.extend_from_slice(r.entries());
            rays.push(IntVector::new(e));
        }
        let offset = self.rays.len();
        let mut cones = Vec::with_capacity(self.max_cones.len() * other.max_cones.len());
        for a in &self.max_cones {
            for b in &other.max_cones {
                let mut c = a.clone();
                c.extend(b.iter().map(|&i| i + offset));
                cones.push(c);
            }
        }
        Fan::new(dim, rays, cones)
    }

    /// Stellar subdivision at a cone of the fan, given by its ray indices.
    /// The new ray is the sum of the cone's primitive generators; every
    /// maximal cone containing the subdivided cone is replaced by the cones
    /// swapping one member for the new ray. Subdividing a maximal cone of a
    /// smooth complete fan is the fan of the equivariant blow-up at the
    /// corresponding fixed point.
    pub fn stellar_subdivide(&self, cone: &[usize]) -> Result<Fan> {
        let mut cone: Vec<usize> = cone.to_vec();
        cone.sort_unstable();
        cone.dedup();
        if cone.is_empty() || cone.iter().any(|&r| r >= self.rays.len()) {
            return Err(Error::NotAFace(cone));
        }
        if !self
            .max_cones
            .iter()
            .any(|c| cone.iter().all(|r| c.contains(r)))
        {
            return Err(Error::NotAFace(cone));
        }
        let mut new_ray = IntVector::zeros(self.dim);
        for &r in &cone {
            new_ray = new_ray.add(&self.rays[r]);
        }
        if !new_ray.is_primitive() {
            return Err(Error::ImprimitiveSubdivisionRay(new_ray.to_string()));
        }
        if let Some(i) = self.rays.iter().position(|r| *r == new_ray) {
            return Err(Error::DuplicateSubdivisionRay(new_ray.to_string(), i + 1));
        }
        let new_index = self.rays.len();
        let mut rays = self.rays.clone();
        rays.push(new_ray);
        let mut cones = Vec::new();
        for c in &self.max_cones {
            if cone.iter().all(|r| c.contains(r)) {
                for &drop in &cone {
                    let mut replaced: Vec<usize> =
                        c.iter().copied().filter(|&r| r != drop).collect();
                    replaced.push(new_index);
                    cones.push(replaced);
                }
            } else {
                cones.push(c.clone());
            }
        }
        Ok(Fan::new(self.dim, rays, cones))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&FanFile::from(self)).expect("serializable")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: FanFile = serde_json::from_str(text)?;
        file.into_fan()
    }
}

/// Parameters of a generalized Bott tower: for each stage the fiber dimension
/// `n_j`, and for each stage `j >= 2` one twist vector per fiber coordinate,
/// listing the first Chern class of the corresponding line bundle in the
/// degree-2 generators of the earlier stages (so the vector has length
/// `j - 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BottTowerData {
    pub stage_dims: Vec<usize>,
    pub twists: Vec<Vec<IntVector>>,
}

impl BottTowerData {
    pub fn validate(&self) -> Result<()> {
        if self.stage_dims.is_empty() || self.stage_dims.contains(&0) {
            return Err(Error::InvalidParameter(
                "stage dimensions must be positive".into(),
            ));
        }
        if self.twists.len() + 1 != self.stage_dims.len() {
            return Err(Error::InvalidParameter(format!(
                "{} stages need {} twist groups, got {}",
                self.stage_dims.len(),
                self.stage_dims.len() - 1,
                self.twists.len()
            )));
        }
        for (g, group) in self.twists.iter().enumerate() {
            let stage = g + 2;
            if group.len() != self.stage_dims[stage - 1] {
                return Err(Error::InvalidParameter(format!(
                    "stage {} has fiber dimension {} but {} twist vectors",
                    stage,
                    self.stage_dims[stage - 1],
                    group.len()
                )));
            }
            for t in group {
                if t.len() != stage - 1 {
                    return Err(Error::InvalidParameter(format!(
                        "twist vector {} for stage {} must have length {}",
                        t,
                        stage,
                        stage - 1
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Fan of the projective space of complex dimension `n`.
pub fn projective_space(n: usize) -> Result<Fan> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "projective space needs dimension >= 1".into(),
        ));
    }
    let mut rays = Vec::with_capacity(n + 1);
    for i in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[i] = BigInt::one();
        rays.push(IntVector::new(e));
    }
    rays.push(IntVector::new(vec![-BigInt::one(); n]));
    let cones = (0..=n).combinations(n).collect();
    Ok(Fan::new(n, rays, cones))
}

/// Fan of a generalized Bott tower.
///
/// Coordinates are grouped by stage. The rays are listed with every standard
/// basis ray first (stage by stage, fiber by fiber) followed by one extra ray
/// per stage; the extra ray of stage `j` is minus the sum of stage `j`'s
/// basis vectors plus, in each later stage's block, that stage's twist
/// coefficients attached to stage `j`. Maximal cones drop exactly one ray of
/// each stage. Forgetting the blocks of the later stages projects the fan
/// onto the fan of the shorter tower, realizing the bundle maps.
pub fn bott_tower(data: &BottTowerData) -> Result<Fan> {
    data.validate()?;
    let h = data.stage_dims.len();
    let total: usize = data.stage_dims.iter().sum();
    let offsets: Vec<usize> = data
        .stage_dims
        .iter()
        .scan(0, |acc, &n| {
            let off = *acc;
            *acc += n;
            Some(off)
        })
        .collect();

    let mut rays = Vec::with_capacity(total + h);
    for i in 0..total {
        let mut e = vec![BigInt::zero(); total];
        e[i] = BigInt::one();
        rays.push(IntVector::new(e));
    }
    for j in 0..h {
        let mut e = vec![BigInt::zero(); total];
        for i in 0..data.stage_dims[j] {
            e[offsets[j] + i] = -BigInt::one();
        }
        for k in j + 1..h {
            for i in 0..data.stage_dims[k] {
                e[offsets[k] + i] = data.twists[k - 1][i].get(j).clone();
            }
        }
        rays.push(IntVector::new(e));
    }

    // Ray indices of stage j: its basis rays and then its extra ray.
    let stage_rays: Vec<Vec<usize>> = (0..h)
        .map(|j| {
            let mut v: Vec<usize> = (offsets[j]..offsets[j] + data.stage_dims[j]).collect();
            v.push(total + j);
            v
        })
        .collect();

    let mut cones = Vec::new();
    let mut omit = vec![0usize; h];
    loop {
        let mut cone = Vec::with_capacity(total);
        for j in 0..h {
            for (pos, &r) in stage_rays[j].iter().enumerate() {
                if pos != omit[j] {
                    cone.push(r);
                }
            }
        }
        cones.push(cone);
        // odometer over which ray each stage omits
        let mut j = h;
        loop {
            if j == 0 {
                return Ok(Fan::new(total, rays, cones));
            }
            j -= 1;
            if omit[j] < data.stage_dims[j] {
                omit[j] += 1;
                break;
            }
            omit[j] = 0;
        }
    }
}

/// Fan of the Hirzebruch surface `P(C + gamma^a)` as a 2-stage Bott tower.
pub fn hirzebruch(a: i64) -> Fan {
    bott_tower(&BottTowerData {
        stage_dims: vec![1, 1],
        twists: vec![vec![IntVector::from_i64(&[a])]],
    })
    .expect("well-formed tower data")
}

/// The product of the projective plane and the projective line, the starting
/// point of the double blow-up example.
pub fn cp2_times_cp1() -> Fan {
    projective_space(2)
        .unwrap()
        .product(&projective_space(1).unwrap())
}

/// Blow-up of `cp2_times_cp1` at its lexicographically first fixed point.
/// All six choices of fixed point give isomorphic underlying complexes.
pub fn example_4_3_stage1() -> Fan {
    let y = cp2_times_cp1();
    let first = y.max_cones().iter().min().expect("nonempty").clone();
    y.stellar_subdivide(&first).expect("maximal cone")
}

/// Blow up [`example_4_3_stage1`] a second time at each fixed point and
/// bucket the results by isomorphism of the underlying complex: exactly
/// three classes arise. Returns the earliest representative of each class,
/// in blow-up order.
pub fn example_4_3_triple() -> [Fan; 3] {
    let stage1 = example_4_3_stage1();
    let mut reps: Vec<(Fan, SimplicialComplex)> = Vec::new();
    for cone in stage1.max_cones() {
        let fan = stage1.stellar_subdivide(cone).expect("maximal cone");
        let complex = fan.underlying_complex().expect("valid fan");
        if !reps
            .iter()
            .any(|(_, c)| crate::isosearch::complexes_isomorphic(c, &complex).is_some())
        {
            reps.push((fan, complex));
        }
    }
    let mut it = reps.into_iter().map(|(f, _)| f);
    let triple = [
        it.next().expect("three classes"),
        it.next().expect("three classes"),
        it.next().expect("three classes"),
    ];
    assert!(it.next().is_none(), "expected exactly three complex classes");
    triple
}

/// Exact feasibility over the rationals of a system `sum c_i x_i + d >= 0`
/// by Fourier-Motzkin elimination. Each row holds the `vars` coefficients
/// followed by the constant term.
fn fourier_motzkin_feasible(rows: Vec<Vec<BigInt>>, vars: usize) -> bool {
    let mut system: HashSet<Vec<BigInt>> = rows.into_iter().map(normalize_row).collect();
    for var in 0..vars {
        let mut lower = Vec::new(); // coefficient > 0
        let mut upper = Vec::new(); // coefficient < 0
        let mut rest = HashSet::new();
        for row in system {
            match row[var].sign() {
                num_bigint::Sign::Plus => lower.push(row),
                num_bigint::Sign::Minus => upper.push(row),
                num_bigint::Sign::NoSign => {
                    rest.insert(row);
                }
            }
        }
        for lo in &lower {
            for up in &upper {
                let a = lo[var].clone();
                let b = -up[var].clone();
                // b*lo + a*up eliminates the variable; both multipliers positive.
                let combined: Vec<BigInt> =
                    lo.iter().zip(up).map(|(l, u)| &b * l + &a * u).collect();
                rest.insert(normalize_row(combined));
            }
        }
        system = rest;
    }
    system.iter().all(|row| !row[vars].is_negative())
}

fn normalize_row(mut row: Vec<BigInt>) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for x in &row {
        g = g.gcd(x);
    }
    if g > BigInt::one() {
        for x in &mut row {
            *x = &*x / &g;
        }
    }
    row
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
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
            self.parent[ra] = rb;
        }
    }
}

/// On-disk fan format: `{"dim": n, "rays": [[..]], "max_cones": [[1-based]]}`.
/// Ray order is significant; it labels the divisor classes. An optional
/// `provenance` string records how a file was produced and is otherwise
/// ignored.
#[derive(Serialize, Deserialize)]
struct FanFile {
    dim: usize,
    rays: Vec<Vec<serde_json::Number>>,
    max_cones: Vec<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    provenance: Option<String>,
}

impl From<&Fan> for FanFile {
    fn from(f: &Fan) -> Self {
        use std::str::FromStr;
        FanFile {
            dim: f.dim,
            rays: f
                .rays
                .iter()
                .map(|r| {
                    r.entries()
                        .iter()
                        .map(|x| serde_json::Number::from_str(&x.to_string()).expect("integer"))
                        .collect()
                })
                .collect(),
            max_cones: f
                .max_cones
                .iter()
                .map(|c| c.iter().map(|&r| r as i64 + 1).collect())
                .collect(),
            provenance: None,
        }
    }
}

impl FanFile {
    fn into_fan(self) -> Result<Fan> {
        let mut rays = Vec::with_capacity(self.rays.len());
        for row in &self.rays {
            let entries = row.iter().map(number_to_bigint).collect::<Result<Vec<_>>>()?;
            rays.push(IntVector::new(entries));
        }
        let mut cones = Vec::with_capacity(self.max_cones.len());
        for c in &self.max_cones {
            let mut cone = Vec::with_capacity(c.len());
            for &r in c {
                if r < 1 {
                    return Err(Error::InvalidParameter(format!(
                        "ray index {} in max_cones must be a positive 1-based index",
                        r
                    )));
                }
                cone.push(r as usize - 1);
            }
            cones.push(cone);
        }
        Ok(Fan::new(self.dim, rays, cones))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cp2() -> Fan {
        projective_space(2).unwrap()
    }

    fn assert_all_good(f: &Fan) {
        let report = f.validate();
        assert!(report.valid, "{:?}", report.violations);
        assert!(report.complete, "{:?}", report.violations);
        assert!(report.smooth, "{:?}", report.violations);
    }

    #[test]
    fn cp2_is_valid_complete_smooth() {
        assert_all_good(&cp2());
    }

    #[test]
    fn removing_a_cone_breaks_completeness() {
        let f = cp2();
        let partial = Fan::new(2, f.rays().to_vec(), f.max_cones()[..2].to_vec());
        let report = partial.validate();
        assert!(report.valid, "{:?}", report.violations);
        assert!(!report.complete);
        assert!(report.violations.iter().any(|v| v.contains("wall")));
    }

    #[test]
    fn imprimitive_and_overlapping_rays_are_reported() {
        let f = Fan::new(
            2,
            vec![
                IntVector::from_i64(&[1, 0]),
                IntVector::from_i64(&[2, 0]),
                IntVector::from_i64(&[0, 1]),
            ],
            vec![vec![0, 2], vec![1, 2]],
        );
        let report = f.validate();
        assert!(!report.valid);
        assert!(report.violations.iter().any(|v| v.contains("not primitive")));
        assert!(report.violations.iter().any(|v| v.contains("improperly")));
    }

    #[test]
    fn projective_spaces() {
        assert!(projective_space(0).is_err());
        let cp1 = projective_space(1).unwrap();
        assert_eq!(cp1.rays().len(), 2);
        assert_all_good(&cp1);
        let cp3 = projective_space(3).unwrap();
        assert_eq!(cp3.rays().len(), 4);
        assert_eq!(cp3.max_cones().len(), 4);
        assert_all_good(&cp3);
    }

    #[test]
    fn hirzebruch_fans() {
        for a in -3..=3 {
            let f = hirzebruch(a);
            assert_all_good(&f);
            assert_eq!(f.rays().len(), 4);
            assert_eq!(f.max_cones().len(), 4);
        }
        let f1 = hirzebruch(1);
        assert_eq!(f1.ray(2), &IntVector::from_i64(&[-1, 1]));
        let fm1 = hirzebruch(-1);
        let set: HashSet<_> = fm1.rays().iter().cloned().collect();
        for v in [[1, 0], [-1, -1], [0, 1], [0, -1]] {
            assert!(set.contains(&IntVector::from_i64(&v)));
        }
    }

    #[test]
    fn hirzebruch_zero_is_a_product() {
        let f0 = hirzebruch(0);
        let p = projective_space(1)
            .unwrap()
            .product(&projective_space(1).unwrap());
        assert_eq!(
            f0.rays().iter().collect::<HashSet<_>>(),
            p.rays().iter().collect::<HashSet<_>>()
        );
        assert_all_good(&p);
    }

    #[test]
    fn product_counts_and_point_identity() {
        let p = cp2_times_cp1();
        assert_eq!(p.rays().len(), 5);
        assert_eq!(p.max_cones().len(), 6);
        assert_all_good(&p);

        let point = Fan::new(0, vec![], vec![vec![]]);
        assert!(point.validate().valid);
        let same = cp2().product(&point);
        assert_eq!(same, cp2());
    }

    #[test]
    fn underlying_complexes() {
        let c = cp2().underlying_complex().unwrap();
        assert_eq!(c.f_vector(), vec![3, 3]);
        for a in [-2, 0, 5] {
            let c = hirzebruch(a).underlying_complex().unwrap();
            assert_eq!(c.f_vector(), vec![4, 4]);
        }
        // Suspension of the triangle boundary: two apexes joined to each edge.
        let c = cp2_times_cp1().underlying_complex().unwrap();
        assert_eq!(c.f_vector(), vec![5, 9, 6]);
        assert_eq!(c.minimal_nonfaces(), vec![vec![3, 4], vec![0, 1, 2]]);
    }

    #[test]
    fn blowup_of_cp2_is_first_hirzebruch() {
        let f = cp2().stellar_subdivide(&[0, 1]).unwrap();
        assert_eq!(f.rays().len(), 4);
        assert_eq!(f.ray(3), &IntVector::from_i64(&[1, 1]));
        assert_all_good(&f);
        assert!(crate::isosearch::fans_isomorphic(&f, &hirzebruch(1)).is_some());
    }

    #[test]
    fn stellar_errors() {
        let f = cp2();
        assert!(matches!(f.stellar_subdivide(&[0, 5]), Err(Error::NotAFace(_))));
        assert!(matches!(f.stellar_subdivide(&[]), Err(Error::NotAFace(_))));
        // Subdividing a single ray reproduces that ray.
        assert!(matches!(
            projective_space(1).unwrap().stellar_subdivide(&[0]),
            Err(Error::DuplicateSubdivisionRay(..))
        ));
        // A singular cone can sum to an imprimitive vector.
        let singular = Fan::new(
            2,
            vec![IntVector::from_i64(&[1, 0]), IntVector::from_i64(&[1, 2])],
            vec![vec![0, 1]],
        );
        assert!(matches!(
            singular.stellar_subdivide(&[0, 1]),
            Err(Error::ImprimitiveSubdivisionRay(_))
        ));
    }

    #[test]
    fn bott_tower_single_stage_is_projective_space() {
        let data = BottTowerData {
            stage_dims: vec![3],
            twists: vec![],
        };
        let f = bott_tower(&data).unwrap();
        assert_eq!(f, projective_space(3).unwrap());
    }

    #[test]
    fn bott_tower_zero_twists_give_products() {
        let data = BottTowerData {
            stage_dims: vec![2, 1],
            twists: vec![vec![IntVector::from_i64(&[0])]],
        };
        let f = bott_tower(&data).unwrap();
        assert_all_good(&f);
        assert!(crate::isosearch::fans_isomorphic(&f, &cp2_times_cp1()).is_some());
    }

    #[test]
    fn bott_tower_cone_count() {
        let data = BottTowerData {
            stage_dims: vec![1, 2, 1],
            twists: vec![
                vec![IntVector::from_i64(&[1]), IntVector::from_i64(&[-2])],
                vec![IntVector::from_i64(&[3, 0])],
            ],
        };
        let f = bott_tower(&data).unwrap();
        assert_eq!(f.max_cones().len(), 2 * 3 * 2);
        assert_all_good(&f);
    }

    #[test]
    fn example_4_3_shapes() {
        let stage1 = example_4_3_stage1();
        assert_eq!(stage1.rays().len(), 6);
        assert_eq!(stage1.max_cones().len(), 8);
        assert_all_good(&stage1);

        let triple = example_4_3_triple();
        for f in &triple {
            assert_eq!(f.rays().len(), 7);
            assert_eq!(f.max_cones().len(), 10);
            assert_all_good(f);
        }
    }

    #[test]
    fn json_roundtrip() {
        let f = hirzebruch(2);
        let text = f.to_json_string();
        let back = Fan::from_json_str(&text).unwrap();
        assert_eq!(back, f);
        assert!(Fan::from_json_str("{\"dim\": 2").is_err());
        let zero_based = r#"{"dim":1,"rays":[[1],[-1]],"max_cones":[[0],[1]]}"#;
        assert!(Fan::from_json_str(zero_based).is_err());
    }
}
