//! Lagrangian subspaces of `V ⊕ V*`, with the pairing
//! `⟨v⊕η, w⊕ζ⟩ = η(w) + ζ(v)`.
//!
//! A subspace is stored as a `2n × n` matrix whose columns span it; the first
//! `n` rows hold the vector part and the last `n` the covector part.

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix};

#[derive(Clone, Debug, PartialEq)]
pub struct LinearDiracSpace<T: Field> {
    basis: Matrix<T>,
}

/// Why a candidate fails to be Lagrangian.
#[derive(Clone, Debug, PartialEq)]
pub enum LagrangianDefect<T: Field> {
    /// Column rank below `n`.
    Rank { rank: usize, expected: usize },
    /// Columns `i` and `j` pair to a nonzero value.
    Pairing { i: usize, j: usize, value: T },
}

/// The pairing matrix `Sᵀ J T` between two column families.
pub fn pairing_matrix<T: Field>(s: &Matrix<T>, t: &Matrix<T>) -> Result<Matrix<T>> {
    if s.rows() != t.rows() || !s.rows().is_multiple_of(2) {
        return Err(Error::ShapeMismatch(format!(
            "pairing of {}-row and {}-row families",
            s.rows(),
            t.rows()
        )));
    }
    let n = s.rows() / 2;
    let mut out = Matrix::zeros(s.cols(), t.cols());
    for i in 0..s.cols() {
        for j in 0..t.cols() {
            let mut acc = T::zero();
            for k in 0..n {
                let a = s.get(n + k, i).mul(t.get(k, j));
                let b = t.get(n + k, j).mul(s.get(k, i));
                acc = acc.add(&a).add(&b);
            }
            out.set(i, j, acc);
        }
    }
    Ok(out)
}

/// Checks rank `n` and isotropy of a `2n × n` candidate.
pub fn is_lagrangian<T: Field>(s: &Matrix<T>) -> Result<Option<LagrangianDefect<T>>> {
    if s.rows() != 2 * s.cols() {
        return Err(Error::ShapeMismatch(format!(
            "expected a 2n x n matrix, found {} x {}",
            s.rows(),
            s.cols()
        )));
    }
    let n = s.cols();
    let rank = s.rank();
    if rank != n {
        return Ok(Some(LagrangianDefect::Rank { rank, expected: n }));
    }
    let p = pairing_matrix(s, s)?;
    for i in 0..n {
        for j in i..n {
            if !p.get(i, j).is_zero() {
                return Ok(Some(LagrangianDefect::Pairing {
                    i,
                    j,
                    value: p.get(i, j).clone(),
                }));
            }
        }
    }
    Ok(None)
}

/// Indices of a maximal linearly independent subset of columns.
pub fn independent_columns<T: Field>(m: &Matrix<T>) -> Vec<usize> {
    m.echelon().pivots
}

impl<T: Field> LinearDiracSpace<T> {
    /// Wraps a basis after checking that it spans a Lagrangian subspace.
    pub fn new(basis: Matrix<T>) -> Result<Self> {
        match is_lagrangian(&basis)? {
            None => Ok(LinearDiracSpace { basis }),
            Some(d) => Err(Error::Invalid(format!("not Lagrangian: {}", describe(&d)))),
        }
    }

    /// Wraps a basis without checking it.
    pub fn from_basis_unchecked(basis: Matrix<T>) -> Self {
        LinearDiracSpace { basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix<T> {
        &self.basis
    }

    pub fn vector_block(&self) -> Matrix<T> {
        self.basis.row_block(0, self.dim())
    }

    pub fn covector_block(&self) -> Matrix<T> {
        self.basis.row_block(self.dim(), 2 * self.dim())
    }

    /// `V ⊕ 0`.
    pub fn tangent(n: usize) -> Self {
        LinearDiracSpace {
            basis: Matrix::identity(n).vcat(&Matrix::zeros(n, n)),
        }
    }

    /// `0 ⊕ V*`.
    pub fn cotangent(n: usize) -> Self {
        LinearDiracSpace {
            basis: Matrix::zeros(n, n).vcat(&Matrix::identity(n)),
        }
    }

    /// Columns `(v, Bv)`.
    pub fn graph_of_two_form(b: &Matrix<T>) -> Result<Self> {
        if !b.is_skew() {
            return Err(Error::NotSkew);
        }
        Ok(LinearDiracSpace {
            basis: Matrix::identity(b.rows()).vcat(b),
        })
    }

    /// Columns `(Pη, η)`.
    pub fn graph_of_bivector(p: &Matrix<T>) -> Result<Self> {
        if !p.is_skew() {
            return Err(Error::NotSkew);
        }
        Ok(LinearDiracSpace {
            basis: p.vcat(&Matrix::identity(p.rows())),
        })
    }

    /// `{ v ⊕ (η + Bv) : v ⊕ η ∈ L }`.
    pub fn gauge_shift(&self, b: &Matrix<T>) -> Result<Self> {
        if !b.is_skew() {
            return Err(Error::NotSkew);
        }
        if b.rows() != self.dim() {
            return Err(Error::ShapeMismatch("gauge matrix size".into()));
        }
        let v = self.vector_block();
        let eta = self.covector_block().add(&b.mul(&v));
        Ok(LinearDiracSpace {
            basis: v.vcat(&eta),
        })
    }

    /// `{ w ⊕ Aᵀη : Aw ⊕ η ∈ L }` for `A` mapping the source space into the
    /// space carrying `L`.
    pub fn backward_image(&self, a: &Matrix<T>) -> Result<Self> {
        let m = self.dim();
        if a.rows() != m {
            return Err(Error::ShapeMismatch(format!(
                "linear map with {} rows into a space of dimension {m}",
                a.rows()
            )));
        }
        let n = a.cols();
        let v = self.vector_block();
        let h = self.covector_block();
        // Unknowns (w, c) with A w = V c; the image column is (w, Aᵀ H c).
        let system = a.hcat(&v.neg());
        let kernel = system.kernel();
        let at = a.transpose();
        let mut cols = Vec::with_capacity(kernel.len());
        for k in &kernel {
            let w = k[..n].to_vec();
            let c = &k[n..];
            let eta = at.mul_vec(&h.mul_vec(c));
            let mut col = w;
            col.extend(eta);
            cols.push(col);
        }
        let candidates = Matrix::from_columns(2 * n, &cols);
        let keep = independent_columns(&candidates);
        let basis = candidates.select_columns(&keep);
        if basis.cols() != n {
            return Err(Error::Invalid(format!(
                "backward image has dimension {} instead of {n}",
                basis.cols()
            )));
        }
        Ok(LinearDiracSpace { basis })
    }

    /// Equality of column spans.
    pub fn subspace_equal(&self, other: &Self) -> Result<bool> {
        if self.basis.rows() != other.basis.rows() {
            return Err(Error::ShapeMismatch("ambient dimensions differ".into()));
        }
        let r1 = self.basis.rank();
        let r2 = other.basis.rank();
        if r1 != r2 {
            return Ok(false);
        }
        Ok(self.basis.hcat(&other.basis).rank() == r1)
    }

    /// Whether `v ⊕ η` lies in the subspace.
    pub fn contains(&self, v: &[T], eta: &[T]) -> bool {
        let mut col = v.to_vec();
        col.extend_from_slice(eta);
        self.basis.solve(&col).is_some()
    }
}

fn describe<T: Field>(d: &LagrangianDefect<T>) -> String {
    match d {
        LagrangianDefect::Rank { rank, expected } => format!("rank {rank} < {expected}"),
        LagrangianDefect::Pairing { i, j, value } => {
            format!("columns {i} and {j} pair to {value}")
        }
    }
}

impl<T: Field> std::fmt::Display for LagrangianDefect<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&describe(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::QMatrix;
    use crate::symbolic::{rat, Rational};

    fn q(rows: &[&[i64]]) -> QMatrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    fn area() -> QMatrix {
        q(&[&[0, -1], &[1, 0]])
    }

    #[test]
    fn lagrangian_examples() {
        let t = LinearDiracSpace::<Rational>::tangent(2);
        assert_eq!(is_lagrangian(t.basis()).unwrap(), None);
        let bad = q(&[&[1], &[1]]);
        assert_eq!(
            is_lagrangian(&bad).unwrap(),
            Some(LagrangianDefect::Pairing { i: 0, j: 0, value: rat(2) })
        );
        // span{(∂x, dy), (∂y, -dx)}
        let g = q(&[&[1, 0], &[0, 1], &[0, -1], &[1, 0]]);
        assert_eq!(is_lagrangian(&g).unwrap(), None);
        assert!(is_lagrangian(&q(&[&[1, 0]])).is_err());
    }

    #[test]
    fn backward_image_examples() {
        let l = LinearDiracSpace::graph_of_two_form(&area()).unwrap();
        let zero = q(&[&[0], &[0]]);
        let t1 = LinearDiracSpace::<Rational>::tangent(1);
        assert!(l.backward_image(&zero).unwrap().subspace_equal(&t1).unwrap());
        assert!(l.backward_image(&Matrix::identity(2)).unwrap().subspace_equal(&l).unwrap());
        let incl = q(&[&[1], &[0]]);
        assert!(l.backward_image(&incl).unwrap().subspace_equal(&t1).unwrap());
    }

    #[test]
    fn gauge_shift_examples() {
        let t = LinearDiracSpace::<Rational>::tangent(2);
        let g = LinearDiracSpace::graph_of_two_form(&area()).unwrap();
        assert!(t.gauge_shift(&area()).unwrap().subspace_equal(&g).unwrap());
        assert!(g.gauge_shift(&Matrix::zeros(2, 2)).unwrap().subspace_equal(&g).unwrap());
        assert!(g.gauge_shift(&area().neg()).unwrap().subspace_equal(&t).unwrap());
        assert_eq!(t.gauge_shift(&q(&[&[1, 0], &[0, 0]])), Err(Error::NotSkew));
    }

    #[test]
    fn graph_examples() {
        let zero = Matrix::<Rational>::zeros(2, 2);
        let c = LinearDiracSpace::<Rational>::cotangent(2);
        let t = LinearDiracSpace::<Rational>::tangent(2);
        assert!(LinearDiracSpace::graph_of_bivector(&zero).unwrap().subspace_equal(&c).unwrap());
        assert!(LinearDiracSpace::graph_of_two_form(&zero).unwrap().subspace_equal(&t).unwrap());
        let p = q(&[&[0, 1], &[-1, 0]]);
        let gp = LinearDiracSpace::graph_of_bivector(&p).unwrap();
        let gw = LinearDiracSpace::graph_of_two_form(&area()).unwrap();
        assert!(gp.subspace_equal(&gw).unwrap());
    }

    #[test]
    fn subspace_equality_examples() {
        let g = LinearDiracSpace::graph_of_two_form(&area()).unwrap();
        let swapped = LinearDiracSpace::from_basis_unchecked(g.basis().select_columns(&[1, 0]));
        assert!(g.subspace_equal(&swapped).unwrap());
        let t = LinearDiracSpace::<Rational>::tangent(1);
        let c = LinearDiracSpace::<Rational>::cotangent(1);
        assert!(!t.subspace_equal(&c).unwrap());
        // rows (xi, x | dxi, dx): span{(∂ξ, dx), (0, dx)} vs span{(∂ξ, 0), (0, dx)}
        let a = LinearDiracSpace::from_basis_unchecked(q(&[&[1, 0], &[0, 0], &[0, 0], &[1, 1]]));
        let b = LinearDiracSpace::from_basis_unchecked(q(&[&[1, 0], &[0, 0], &[0, 0], &[0, 1]]));
        assert!(a.subspace_equal(&b).unwrap());
    }
}
