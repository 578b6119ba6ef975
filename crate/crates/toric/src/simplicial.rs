//! Finite abstract simplicial complexes given by their maximal faces.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A simplicial complex on vertices `0..vertex_count`, stored by its facets
/// (inclusion-maximal faces). Facets are kept sorted, as is the facet list,
/// so equal complexes compare equal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimplicialComplex {
    vertex_count: usize,
    facets: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Build a complex, normalizing facet order. Rejects out-of-range or
    /// repeated vertices, facets contained in one another, and vertices
    /// missing from every facet.
    pub fn new(vertex_count: usize, facets: Vec<Vec<usize>>) -> Result<Self> {
        if facets.is_empty() {
            return Err(Error::InvalidComplex("no facets".into()));
        }
        let mut norm: Vec<Vec<usize>> = Vec::with_capacity(facets.len());
        for f in &facets {
            if f.is_empty() && vertex_count > 0 {
                return Err(Error::InvalidComplex("empty facet".into()));
            }
            let mut g = f.clone();
            g.sort_unstable();
            if g.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidComplex(format!("repeated vertex in facet {:?}", f)));
            }
            if g.last().is_some_and(|&v| v >= vertex_count) {
                return Err(Error::InvalidComplex(format!(
                    "facet {:?} references a vertex >= {}",
                    f, vertex_count
                )));
            }
            norm.push(g);
        }
        norm.sort();
        norm.dedup();
        for (a, b) in norm.iter().tuple_combinations() {
            if is_subset(a, b) || is_subset(b, a) {
                return Err(Error::InvalidComplex(format!(
                    "facets {:?} and {:?} are nested",
                    a, b
                )));
            }
        }
        let mut seen = vec![false; vertex_count];
        for f in &norm {
            for &v in f {
                seen[v] = true;
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidComplex(format!("vertex {} is in no facet", v)));
        }
        Ok(SimplicialComplex { vertex_count, facets: norm })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    /// Dimension of the complex (largest facet size minus one).
    pub fn dim(&self) -> usize {
        self.facets.iter().map(|f| f.len()).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn is_pure(&self) -> bool {
        let d = self.facets[0].len();
        self.facets.iter().all(|f| f.len() == d)
    }

    pub fn is_face(&self, face: &[usize]) -> bool {
        self.facets.iter().any(|f| is_subset_unsorted(face, f))
    }

    /// All nonempty faces, sorted.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let mut set: BTreeSet<Vec<usize>> = BTreeSet::new();
        for f in &self.facets {
            for k in 1..=f.len() {
                for sub in f.iter().copied().combinations(k) {
                    set.insert(sub);
                }
            }
        }
        set.into_iter().collect()
    }

    /// `f_vector()[i]` counts the i-dimensional faces ((i+1)-element subsets).
    pub fn f_vector(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.dim() + 1];
        for face in self.faces() {
            counts[face.len() - 1] += 1;
        }
        counts
    }

    /// Minimal non-faces: subsets that are not faces while all their proper
    /// subsets are. These index the Stanley-Reisner relations.
    pub fn minimal_nonfaces(&self) -> Vec<Vec<usize>> {
        let max_facet = self.facets.iter().map(|f| f.len()).max().unwrap_or(0);
        let mut out = Vec::new();
        for size in 1..=(max_facet + 1).min(self.vertex_count) {
            'subset: for sub in (0..self.vertex_count).combinations(size) {
                if self.is_face(&sub) {
                    continue;
                }
                for skip in 0..size {
                    let mut proper: Vec<usize> = sub.clone();
                    proper.remove(skip);
                    if !proper.is_empty() && !self.is_face(&proper) {
                        continue 'subset;
                    }
                }
                out.push(sub);
            }
        }
        out
    }

    /// Number of facets containing each vertex.
    pub fn vertex_facet_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.vertex_count];
        for f in &self.facets {
            for &v in f {
                deg[v] += 1;
            }
        }
        deg
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&ComplexFile::from(self)).expect("serializable")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: ComplexFile = serde_json::from_str(text)?;
        file.into_complex()
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    // both sorted
    let mut it = b.iter();
    'outer: for x in a {
        for y in it.by_ref() {
            if y == x {
                continue 'outer;
            }
            if y > x {
                return false;
            }
        }
        return false;
    }
    true
}

fn is_subset_unsorted(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
}

/// On-disk form: vertices are 1-based in files.
#[derive(Serialize, Deserialize)]
struct ComplexFile {
    vertex_count: usize,
    facets: Vec<Vec<i64>>,
}

impl From<&SimplicialComplex> for ComplexFile {
    fn from(c: &SimplicialComplex) -> Self {
        ComplexFile {
            vertex_count: c.vertex_count,
            facets: c
                .facets
                .iter()
                .map(|f| f.iter().map(|&v| v as i64 + 1).collect())
                .collect(),
        }
    }
}

impl ComplexFile {
    fn into_complex(self) -> Result<SimplicialComplex> {
        let mut facets = Vec::with_capacity(self.facets.len());
        for f in &self.facets {
            let mut g = Vec::with_capacity(f.len());
            for &v in f {
                if v < 1 {
                    return Err(Error::InvalidComplex(format!(
                        "vertex index {} is not a positive 1-based index",
                        v
                    )));
                }
                g.push(v as usize - 1);
            }
            facets.push(g);
        }
        SimplicialComplex::new(self.vertex_count, facets)
    }
}

/// Boundary of a triangle: three vertices, three edges.
#[cfg(test)]
pub(crate) fn triangle_boundary() -> SimplicialComplex {
    SimplicialComplex::new(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_f_vector() {
        let t = triangle_boundary();
        assert_eq!(t.f_vector(), vec![3, 3]);
        assert_eq!(t.dim(), 1);
        assert!(t.is_pure());
        assert_eq!(t.minimal_nonfaces(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn square_minimal_nonfaces() {
        let s = SimplicialComplex::new(4, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]])
            .unwrap();
        assert_eq!(s.f_vector(), vec![4, 4]);
        assert_eq!(s.minimal_nonfaces(), vec![vec![0, 2], vec![1, 3]]);
    }

    #[test]
    fn rejects_nested_facets() {
        assert!(SimplicialComplex::new(3, vec![vec![0, 1, 2], vec![0, 1]]).is_err());
        assert!(SimplicialComplex::new(3, vec![vec![0, 1]]).is_err()); // vertex 2 unused
        assert!(SimplicialComplex::new(2, vec![vec![0, 0], vec![1]]).is_err());
    }

    #[test]
    fn json_roundtrip_uses_one_based_vertices() {
        let t = triangle_boundary();
        let s = t.to_json_string();
        assert!(s.contains("[1,") || s.contains("1,"), "{}", s);
        let back = SimplicialComplex::from_json_str(&s).unwrap();
        assert_eq!(back, t);
    }
}
