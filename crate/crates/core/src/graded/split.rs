//! Direct-sum splitting of submodules of free modules.
//!
//! A submodule `X = im(G) ⊆ F`, with `G: ⊕ R(-b_c) → ⊕ R(-a_j)`, is the
//! same as the family of subspaces `V_d = span{ w_c : d - b_c ∈ S }` of the
//! column space `W ⊆ k^n`, where `w_c` is the coefficient column `c` of `G`:
//! multiplication by `t^s` is the identity on coordinates. Degree-0
//! endomorphisms of `X` are exactly the linear maps of `W` preserving every
//! `V_d`, and the Fitting decomposition of one that is neither nilpotent nor
//! invertible is a graded splitting of `X`.

use super::TermMatrix;
use crate::field::{Echelon, FieldElement, PrimeField, ScalarMatrix};

/// The endomorphism system has `r^4` entries; larger pieces are left whole.
const MAX_RANK: usize = 40;

/// Splits `im(g)` into graded summands, each returned as a generating map
/// into the same free module. Pieces are split further until no candidate
/// endomorphism separates them; the result is always a valid decomposition,
/// though not certified to be into indecomposables.
pub(crate) fn split_image(g: &TermMatrix) -> Vec<TermMatrix> {
    let g = g.select_columns(&g.minimal_columns());
    if g.source.rank() == 0 {
        return Vec::new();
    }
    let f = g.ring.field;
    let n = g.target.rank();
    let m = g.source.rank();

    // basis of W among the columns, and every column in that basis
    let mut span = Echelon::with_tracking(f, n, m);
    let mut basis = Vec::new();
    for c in 0..m {
        let mut e = vec![0; m];
        e[c] = 1;
        if span.insert_tracked(g.coeffs.column(c), e) {
            basis.push(c);
        }
    }
    let r = basis.len();
    if r <= 1 || r > MAX_RANK {
        return vec![g];
    }
    let coords: Vec<Vec<FieldElement>> = (0..m)
        .map(|c| {
            let full = span.express(&g.coeffs.column(c)).expect("column lies in its own span");
            basis.iter().map(|&b| full[b]).collect()
        })
        .collect();

    let Some((p, rank)) = splitting_power(&g, &coords, r) else {
        return vec![g];
    };
    debug_assert!(0 < rank && rank < r);
    // W = im(P) ⊕ ker(P); write each column in a basis adapted to that.
    let image = column_space(&p);
    let kernel = p.kernel_basis().columns();
    let mut adapted = Echelon::with_tracking(f, r, r);
    for (k, v) in image.iter().chain(kernel.iter()).enumerate() {
        let mut e = vec![0; r];
        e[k] = 1;
        let grew = adapted.insert_tracked(v.clone(), e);
        debug_assert!(grew);
    }
    let basis_vectors: Vec<Vec<FieldElement>> = basis.iter().map(|&b| g.coeffs.column(b)).collect();
    let to_ambient = |w: &[FieldElement]| -> Vec<FieldElement> {
        let mut out = vec![0; n];
        for (x, v) in w.iter().zip(&basis_vectors) {
            if *x != 0 {
                f.axpy_neg(&mut out, f.neg(*x), v);
            }
        }
        out
    };
    let mut parts = [Vec::with_capacity(m), Vec::with_capacity(m)];
    for w in &coords {
        let x = adapted.express(w).expect("adapted basis spans W");
        for (half, range) in [(0, 0..rank), (1, rank..r)] {
            let vectors = if half == 0 { &image } else { &kernel };
            let mut piece = vec![0; r];
            for (k, v) in range.clone().zip(vectors.iter()) {
                if x[k] != 0 {
                    f.axpy_neg(&mut piece, f.neg(x[k]), v);
                }
            }
            parts[half].push(to_ambient(&piece));
        }
    }
    parts
        .into_iter()
        .flat_map(|cols| {
            let piece = TermMatrix {
                ring: g.ring.clone(),
                source: g.source.clone(),
                target: g.target.clone(),
                coeffs: ScalarMatrix::from_columns(f, n, &cols),
            };
            split_image(&piece)
        })
        .collect()
}

/// A power `(A - λ)^N` of a degree-0 endomorphism with rank strictly between
/// 0 and `r`, together with that rank.
fn splitting_power(g: &TermMatrix, coords: &[Vec<FieldElement>], r: usize) -> Option<(ScalarMatrix, usize)> {
    let f = g.ring.field;
    let s = &g.ring.semigroup;
    let shifts = g.source.shifts();

    // A w_c ∈ V_{b_c}: for each y annihilating V_{b_c}, y^T A w_c = 0.
    let mut eqs = Echelon::new(f, r * r);
    let mut degrees: Vec<i64> = shifts.to_vec();
    degrees.sort_unstable();
    degrees.dedup();
    for &b in &degrees {
        let inside: Vec<Vec<FieldElement>> =
            (0..coords.len()).filter(|&e| s.contains(b - shifts[e])).map(|e| coords[e].clone()).collect();
        let annihilator = ScalarMatrix::from_columns(f, r, &inside).transpose().kernel_basis();
        for c in (0..coords.len()).filter(|&c| shifts[c] == b) {
            for y in annihilator.columns() {
                let mut row = vec![0; r * r];
                for (i, &yi) in y.iter().enumerate().filter(|(_, &yi)| yi != 0) {
                    for (j, &wj) in coords[c].iter().enumerate() {
                        row[i * r + j] = f.mul(yi, wj);
                    }
                }
                eqs.insert(row);
            }
        }
    }
    let ends = eqs.kernel_basis();
    if ends.cols() <= 1 {
        return None;
    }
    let as_matrix = |v: &[FieldElement]| ScalarMatrix::from_data(f, r, r, v.to_vec());
    let basis: Vec<ScalarMatrix> = ends.columns().iter().map(|v| as_matrix(v)).collect();

    let mut candidates: Vec<ScalarMatrix> = basis.clone();
    for w in basis.windows(2) {
        candidates.push(add(f, &w[0], &w[1]));
    }
    let mut weighted = ScalarMatrix::zeros(f, r, r);
    for (k, a) in basis.iter().enumerate() {
        let c = f.from_i64(((k + 1) * (k + 1)) as i64);
        weighted = add(f, &weighted, &scaled(f, a, c));
    }
    candidates.push(weighted);

    for a in &candidates {
        let mut eigen: Vec<FieldElement> = (0..r).map(|i| a.get(i, i)).collect();
        eigen.push(0);
        eigen.sort_unstable();
        eigen.dedup();
        for lambda in eigen {
            let mut shifted = a.clone();
            for i in 0..r {
                shifted.set(i, i, f.sub(a.get(i, i), lambda));
            }
            let p = stable_power(&shifted, r);
            let rank = p.rank();
            if 0 < rank && rank < r {
                return Some((p, rank));
            }
        }
    }
    None
}

/// `m^(2^k)` with `2^k >= r`, past which image and kernel no longer change.
fn stable_power(m: &ScalarMatrix, r: usize) -> ScalarMatrix {
    let mut p = m.clone();
    let mut e = 1;
    while e < r {
        p = p.mul(&p);
        e *= 2;
    }
    p
}

fn column_space(m: &ScalarMatrix) -> Vec<Vec<FieldElement>> {
    let mut e = Echelon::new(m.field(), m.rows());
    m.columns().into_iter().filter(|c| e.insert(c.clone())).collect()
}

fn add(f: PrimeField, a: &ScalarMatrix, b: &ScalarMatrix) -> ScalarMatrix {
    let data = a.data().iter().zip(b.data()).map(|(&x, &y)| f.add(x, y)).collect();
    ScalarMatrix::from_data(f, a.rows(), a.cols(), data)
}

fn scaled(f: PrimeField, a: &ScalarMatrix, c: FieldElement) -> ScalarMatrix {
    let data = a.data().iter().map(|&x| f.mul(x, c)).collect();
    ScalarMatrix::from_data(f, a.rows(), a.cols(), data)
}
