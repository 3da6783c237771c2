use super::Polynomial;

/// Dense row-major matrix of polynomials.
pub type PolyMatrix = Vec<Vec<Polynomial>>;

/// Fraction-free (Bareiss) determinant. Every intermediate division is exact.
pub fn determinant(m: &[Vec<Polynomial>]) -> Polynomial {
    let n = m.len();
    if n == 0 {
        return Polynomial::one();
    }
    debug_assert!(m.iter().all(|row| row.len() == n), "square matrix expected");
    let mut a: PolyMatrix = m.to_vec();
    let mut negate = false;
    let mut prev = Polynomial::one();
    for k in 0..n - 1 {
        // sparsest nonzero pivot keeps the fill-in down
        let pivot = (k..n)
            .filter(|&i| !a[i][k].is_zero())
            .min_by_key(|&i| a[i][k].num_terms());
        let Some(p) = pivot else {
            return Polynomial::zero();
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = t
                    .div_exact(&prev)
                    .expect("Bareiss step must divide exactly");
            }
            a[i][k] = Polynomial::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

fn minor(m: &[Vec<Polynomial>], skip_row: usize, skip_col: usize) -> PolyMatrix {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != skip_row)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|(j, _)| *j != skip_col)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

/// Column `col` of the adjugate: entry `j` is the `(col, j)` cofactor.
pub fn adjugate_column(m: &[Vec<Polynomial>], col: usize) -> Vec<Polynomial> {
    let n = m.len();
    if n == 1 {
        return vec![Polynomial::one()];
    }
    (0..n)
        .map(|j| {
            let d = determinant(&minor(m, col, j));
            if (j + col) % 2 == 1 {
                -d
            } else {
                d
            }
        })
        .collect()
}

pub fn adjugate(m: &[Vec<Polynomial>]) -> PolyMatrix {
    let n = m.len();
    let cols: Vec<Vec<Polynomial>> = (0..n).map(|c| adjugate_column(m, c)).collect();
    (0..n)
        .map(|i| (0..n).map(|j| cols[j][i].clone()).collect())
        .collect()
}

pub fn mat_vec(m: &[Vec<Polynomial>], v: &[Polynomial]) -> Vec<Polynomial> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(Polynomial::zero(), |acc, (a, b)| acc + a * b)
        })
        .collect()
}

pub fn mat_mul(a: &[Vec<Polynomial>], b: &[Vec<Polynomial>]) -> PolyMatrix {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(Polynomial::zero(), |acc, (x, brow)| acc + x * &brow[j])
                })
                .collect()
        })
        .collect()
}
