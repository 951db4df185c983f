//! Finite-dimensional basic algebras presented by quivers with relations,
//! together with their corners, idempotent quotients, opposites and tensor
//! products.

mod build;
mod derived;
mod quiver;
mod structure;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::exactla::{axpy, Echelon, Field, Mat, Scalar};

pub use build::{build_algebra, build_algebra_with_cap, default_cap};
pub use derived::{corner, corner_embedding, opposite, quotient_by_idempotent_ideal, quotient_with_projection, tensor};
pub use quiver::{Arrow, QuiverPresentation, RelationTerm};
pub(crate) use structure::rebase_by_radical;
pub use structure::{
    algebra_from_table, canonical_cartan, cartan_matrix, center_dim, compute_radical, fingerprint, is_commutative, is_local,
    loewy_vector, num_simples, radical, semisimple_center_dim, AlgebraFingerprint,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("relation {0} involves a path of length < 2")]
    NonAdmissible(usize),
    #[error("relation {0} mixes paths with different endpoints")]
    NonParallel(usize),
    #[error("unknown vertex or arrow {0:?}")]
    UnknownName(String),
    #[error("duplicate label {0:?}")]
    Duplicate(String),
    #[error("new basis paths still appear at path length cap {0}")]
    InfiniteDimensional(usize),
    #[error("path enumeration exceeded budget of {0} paths")]
    PathBudget(usize),
    #[error("empty idempotent subset")]
    EmptyIdempotent,
    #[error("the idempotent ideal is the whole algebra")]
    TrivialQuotient,
    #[error("operation requires vertex idempotents")]
    NoVertexData,
    #[error("bad vertex index {0}")]
    BadVertex(usize),
    #[error("radical computation not available: {0}")]
    RadicalUnavailable(String),
    #[error(transparent)]
    La(#[from] crate::exactla::LaError),
}

/// Where an algebra came from.
#[derive(Clone, Debug, Serialize)]
pub enum Origin {
    Path(QuiverPresentation),
    Corner(Vec<usize>),
    Quotient(Vec<usize>),
    Opposite,
    Tensor,
    Endomorphism,
}

/// Primitive vertex idempotents and the (left, right) vertex tag of every
/// basis element: e_l b e_r = b.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct VertexData {
    pub labels: Vec<String>,
    pub idempotents: Vec<usize>,
    pub tags: Vec<(usize, usize)>,
}

/// Finite-dimensional algebra with a chosen basis and sparse structure
/// constants. The radical is always spanned by a sublist of the basis.
#[derive(Clone)]
pub struct BasedAlgebra {
    field: Field,
    dim: usize,
    labels: Vec<String>,
    table: Vec<Vec<(usize, Scalar)>>,
    unit: Vec<Scalar>,
    vertices: Option<VertexData>,
    radical_basis: Vec<usize>,
    lengths: Option<Vec<usize>>,
    origin: Origin,
}

pub type AlgRef = Arc<BasedAlgebra>;

impl fmt::Debug for BasedAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BasedAlgebra(dim {}, basis {:?})", self.dim, self.labels)
    }
}

impl BasedAlgebra {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_parts(
        field: Field,
        labels: Vec<String>,
        table: Vec<Vec<(usize, Scalar)>>,
        unit: Vec<Scalar>,
        vertices: Option<VertexData>,
        radical_basis: Vec<usize>,
        lengths: Option<Vec<usize>>,
        origin: Origin,
    ) -> BasedAlgebra {
        let dim = labels.len();
        assert_eq!(table.len(), dim * dim);
        BasedAlgebra { field, dim, labels, table, unit, vertices, radical_basis, lengths, origin }
    }

    /// Builds an algebra from a dense table: products[i][j] is the
    /// coefficient vector of b_i b_j.
    pub fn from_dense(field: Field, labels: Vec<String>, products: &[Vec<Vec<Scalar>>], unit: Vec<Scalar>, origin: Origin) -> BasedAlgebra {
        let dim = labels.len();
        let mut table = Vec::with_capacity(dim * dim);
        for row in products.iter().take(dim) {
            for v in row.iter().take(dim) {
                table.push(sparse(v));
            }
        }
        BasedAlgebra { field, dim, labels, table, unit, vertices: None, radical_basis: Vec::new(), lengths: None, origin }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn origin(&self) -> &Origin {
        &self.origin
    }

    pub fn vertex_data(&self) -> Option<&VertexData> {
        self.vertices.as_ref()
    }

    pub fn lengths(&self) -> Option<&[usize]> {
        self.lengths.as_deref()
    }

    /// Number of vertex blocks used by modules: the vertex count, or one
    /// block carried by the unit when no vertex idempotents are known.
    pub fn blocks(&self) -> usize {
        self.num_vertices().max(1)
    }

    /// The idempotent of block u as an element.
    pub fn block_idempotent(&self, u: usize) -> Vec<Scalar> {
        match &self.vertices {
            Some(vd) => self.basis_vector(vd.idempotents[u]),
            None => self.unit.clone(),
        }
    }

    /// Number of vertices (primitive idempotents); zero when unknown.
    pub fn num_vertices(&self) -> usize {
        self.vertices.as_ref().map_or(0, |v| v.idempotents.len())
    }

    pub fn vertex_label(&self, v: usize) -> &str {
        &self.vertices.as_ref().expect("vertex data").labels[v]
    }

    pub fn idempotent(&self, v: usize) -> usize {
        self.vertices.as_ref().expect("vertex data").idempotents[v]
    }

    pub fn tag(&self, i: usize) -> (usize, usize) {
        self.vertices.as_ref().expect("vertex data").tags[i]
    }

    /// Vertex tag, or (0, 0) when no vertex idempotents are known.
    pub fn block_tag(&self, i: usize) -> (usize, usize) {
        self.vertices.as_ref().map_or((0, 0), |v| v.tags[i])
    }

    pub fn radical_basis(&self) -> &[usize] {
        &self.radical_basis
    }

    pub fn is_radical(&self, i: usize) -> bool {
        self.radical_basis.binary_search(&i).is_ok()
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    /// b_i b_j as a sparse combination.
    pub fn product(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.table[i * self.dim + j]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        self.field.unit_vector(self.dim, i)
    }

    pub fn zero_vec(&self) -> Vec<Scalar> {
        self.field.zeros(self.dim)
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = self.zero_vec();
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in self.product(i, j) {
                    out[*k] += &(&ab * c);
                }
            }
        }
        out
    }

    /// b_i * y
    pub fn mul_basis_left(&self, i: usize, y: &[Scalar]) -> Vec<Scalar> {
        let mut out = self.zero_vec();
        for (j, b) in y.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            for (k, c) in self.product(i, j) {
                out[*k] += &(b * c);
            }
        }
        out
    }

    /// x * b_j
    pub fn mul_basis_right(&self, x: &[Scalar], j: usize) -> Vec<Scalar> {
        let mut out = self.zero_vec();
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, c) in self.product(i, j) {
                out[*k] += &(a * c);
            }
        }
        out
    }

    /// Matrix of y ↦ y·x in the row-vector convention (rows indexed by the
    /// basis of the source).
    pub fn right_mult_matrix(&self, x: &[Scalar]) -> Mat {
        let rows = (0..self.dim).map(|i| self.mul_basis_left(i, x)).collect();
        Mat::from_rows(self.field, self.dim, rows)
    }

    /// Matrix of y ↦ x·y in the row-vector convention.
    pub fn left_mult_matrix(&self, x: &[Scalar]) -> Mat {
        let rows = (0..self.dim).map(|j| self.mul_basis_right(x, j)).collect();
        Mat::from_rows(self.field, self.dim, rows)
    }

    /// Basis indices b with e_l b e_r = b.
    pub fn corner_basis(&self, l: usize, r: usize) -> Vec<usize> {
        let vd = self.vertices.as_ref().expect("vertex data");
        (0..self.dim).filter(|&i| vd.tags[i] == (l, r)).collect()
    }

    /// Basis of e_v A (elements with left tag v).
    pub fn left_ideal_basis(&self, v: usize) -> Vec<usize> {
        let vd = self.vertices.as_ref().expect("vertex data");
        (0..self.dim).filter(|&i| vd.tags[i].0 == v).collect()
    }

    /// Basis of A e_v (elements with right tag v).
    pub fn right_ideal_basis(&self, v: usize) -> Vec<usize> {
        let vd = self.vertices.as_ref().expect("vertex data");
        (0..self.dim).filter(|&i| vd.tags[i].1 == v).collect()
    }

    /// Coefficient of the idempotent e_v in an element of e_v A e_v.
    pub fn top_coefficient(&self, x: &[Scalar], v: usize) -> Scalar {
        x[self.idempotent(v)].clone()
    }

    /// Idempotents followed by radical elements spanning J modulo J²:
    /// these generate the algebra.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens: Vec<usize> = (0..self.dim).filter(|i| !self.is_radical(*i)).collect();
        let mut j2 = Echelon::new(self.field, self.dim);
        for &a in &self.radical_basis {
            for &b in &self.radical_basis {
                let mut v = self.zero_vec();
                for (k, c) in self.product(a, b) {
                    v[*k] = c.clone();
                }
                j2.insert(&v);
            }
        }
        // prefer short elements as generators
        let mut rad = self.radical_basis.clone();
        if let Some(l) = &self.lengths {
            rad.sort_by_key(|&i| (l[i], i));
        }
        for &r in &rad {
            if j2.insert(&self.basis_vector(r)) {
                gens.push(r);
            }
        }
        gens
    }

    /// Checks associativity on all basis triples.
    pub fn check_associative(&self) -> bool {
        for i in 0..self.dim {
            for j in 0..self.dim {
                let mut ij = self.zero_vec();
                for (k, c) in self.product(i, j) {
                    ij[*k] = c.clone();
                }
                for k in 0..self.dim {
                    let left = self.mul_basis_right(&ij, k);
                    let mut jk = self.zero_vec();
                    for (m, c) in self.product(j, k) {
                        jk[*m] = c.clone();
                    }
                    let right = self.mul_basis_left(i, &jk);
                    if left != right {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Checks that the unit acts as identity on both sides.
    pub fn check_unit(&self) -> bool {
        (0..self.dim).all(|i| {
            let b = self.basis_vector(i);
            self.mul(&self.unit, &b) == b && self.mul(&b, &self.unit) == b
        })
    }

    /// Same structure constants (and basis size) as other.
    pub fn same_structure(&self, other: &BasedAlgebra) -> bool {
        self.field == other.field && self.dim == other.dim && self.table == other.table && self.unit == other.unit
    }

    /// Re-expresses the algebra over another field; only valid when all
    /// structure constants are integers (true for monomial presentations).
    pub fn reduce_to_field(&self, field: Field) -> Result<BasedAlgebra, AlgebraError> {
        let conv = |s: &Scalar| -> Result<Scalar, AlgebraError> {
            match s.as_rational() {
                Some(r) => Ok(field.from_rational(&r)?),
                None => Ok(field.from_i64(s.to_i64().unwrap())),
            }
        };
        let mut table = Vec::with_capacity(self.table.len());
        for entry in &self.table {
            let mut e = Vec::new();
            for (k, c) in entry {
                let c2 = conv(c)?;
                if !c2.is_zero() {
                    e.push((*k, c2));
                }
            }
            table.push(e);
        }
        let unit = self.unit.iter().map(conv).collect::<Result<Vec<_>, _>>()?;
        let mut out = self.clone();
        out.field = field;
        out.table = table;
        out.unit = unit;
        if let Origin::Path(q) = &mut out.origin {
            q.field = field;
        }
        Ok(out)
    }

    /// Dense product vector b_i b_j.
    pub fn product_vec(&self, i: usize, j: usize) -> Vec<Scalar> {
        let mut v = self.zero_vec();
        for (k, c) in self.product(i, j) {
            v[*k] = c.clone();
        }
        v
    }

    /// Renders an element as a readable linear combination.
    pub fn format_element(&self, x: &[Scalar]) -> String {
        let mut parts = Vec::new();
        for (i, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if c.is_one() {
                parts.push(self.labels[i].clone());
            } else {
                parts.push(format!("{}*{}", c, self.labels[i]));
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }

    /// Adds c * x to acc.
    pub fn accumulate(&self, acc: &mut [Scalar], c: &Scalar, x: &[Scalar]) {
        axpy(acc, c, x);
    }
}

pub(crate) fn sparse(v: &[Scalar]) -> Vec<(usize, Scalar)> {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k, c.clone())).collect()
}
