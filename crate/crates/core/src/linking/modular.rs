//! Linear algebra over the local ring `Z/p^E`.

/// Arithmetic in `Z/p^E`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ring {
    pub p: u64,
    pub e: u32,
    pub q: u64,
}

impl Ring {
    pub fn new(p: u64, e: u32) -> Self {
        Ring { p, e, q: p.pow(e) }
    }

    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.q as i64) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.q
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.q - b) % self.q
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.q as u128) as u64
    }

    /// `p`-adic valuation, with `E` for zero.
    pub fn valuation(&self, mut a: u64) -> u32 {
        if a.is_multiple_of(self.q) {
            return self.e;
        }
        let mut v = 0;
        while a.is_multiple_of(self.p) {
            a /= self.p;
            v += 1;
        }
        v
    }

    /// Inverse of a unit.
    pub fn inv(&self, a: u64) -> u64 {
        let (mut r0, mut r1) = (self.q as i128, a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let k = r0 / r1;
            (r0, r1) = (r1, r0 - k * r1);
            (t0, t1) = (t1, t0 - k * t1);
        }
        debug_assert_eq!(r0, 1, "not a unit");
        t0.rem_euclid(self.q as i128) as u64
    }

    pub fn pow_p(&self, k: u32) -> u64 {
        if k >= self.e {
            0
        } else {
            self.p.pow(k)
        }
    }
}

/// Dense matrix over `Z/p^E`, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<u64>]) -> Self {
        let mut m = Matrix::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: u64) {
        self.data[i * self.cols + j] = x;
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }
}

/// Smith form of a matrix: the valuations `s_k` of the diagonal and the
/// column transform `V` (when requested) with `U A V = diag(p^{s_k})`.
pub struct Smith {
    pub valuations: Vec<u32>,
    pub v: Option<Matrix>,
}

pub fn smith(ring: &Ring, a: &Matrix, track_columns: bool) -> Smith {
    let mut m = a.clone();
    let mut v = track_columns.then(|| {
        let mut id = Matrix::zeros(a.cols, a.cols);
        for i in 0..a.cols {
            id.set(i, i, 1);
        }
        id
    });
    let swap_cols = |m: &mut Matrix, x: usize, y: usize| {
        if x != y {
            for i in 0..m.rows {
                m.data.swap(i * m.cols + x, i * m.cols + y);
            }
        }
    };
    let mut valuations = vec![];
    let rank_bound = a.rows.min(a.cols);
    for k in 0..rank_bound {
        // pivot of least valuation in the remaining block
        let mut best: Option<(u32, usize, usize)> = None;
        for i in k..m.rows {
            for j in k..m.cols {
                let val = ring.valuation(m.get(i, j));
                if val < ring.e && best.is_none_or(|b| val < b.0) {
                    best = Some((val, i, j));
                    if val == 0 {
                        break;
                    }
                }
            }
            if best.is_some_and(|b| b.0 == 0) {
                break;
            }
        }
        let Some((s, pi, pj)) = best else { break };
        if pi != k {
            for j in 0..m.cols {
                m.data.swap(pi * m.cols + j, k * m.cols + j);
            }
        }
        swap_cols(&mut m, pj, k);
        if let Some(v) = v.as_mut() {
            swap_cols(v, pj, k);
        }
        // pivot = p^s · u; scale the row by u⁻¹
        let unit = m.get(k, k) / ring.p.pow(s);
        let uinv = ring.inv(unit % ring.q);
        for j in 0..m.cols {
            let x = ring.mul(m.get(k, j), uinv);
            m.set(k, j, x);
        }
        let piv = ring.p.pow(s);
        for i in 0..m.rows {
            if i == k {
                continue;
            }
            let x = m.get(i, k);
            if x == 0 {
                continue;
            }
            let factor = x / piv;
            for j in 0..m.cols {
                let y = ring.sub(m.get(i, j), ring.mul(factor, m.get(k, j)));
                m.set(i, j, y);
            }
        }
        for j in 0..m.cols {
            if j == k {
                continue;
            }
            let x = m.get(k, j);
            if x == 0 {
                continue;
            }
            let factor = x / piv;
            for i in 0..m.rows {
                let y = ring.sub(m.get(i, j), ring.mul(factor, m.get(i, k)));
                m.set(i, j, y);
            }
            if let Some(v) = v.as_mut() {
                for i in 0..v.rows {
                    let y = ring.sub(v.get(i, j), ring.mul(factor, v.get(i, k)));
                    v.set(i, j, y);
                }
            }
        }
        valuations.push(s);
    }
    Smith { valuations, v }
}

/// Generators of `{x ∈ R^n : A x = 0}`.
pub fn kernel(ring: &Ring, a: &Matrix) -> Vec<Vec<u64>> {
    let sm = smith(ring, a, true);
    let v = sm.v.expect("tracked");
    let mut gens = vec![];
    for k in 0..a.cols {
        let col = v.column(k);
        let scale = match sm.valuations.get(k) {
            Some(&s) => ring.pow_p(ring.e - s),
            None => 1,
        };
        if scale == 0 {
            continue;
        }
        let g: Vec<u64> = col.iter().map(|&x| ring.mul(x, scale)).collect();
        if g.iter().any(|&x| x != 0) {
            gens.push(g);
        }
    }
    gens
}

/// `log_p` of the order of the submodule spanned by the given vectors.
pub fn span_log_order(ring: &Ring, dim: usize, vectors: &[Vec<u64>]) -> u32 {
    if vectors.is_empty() {
        return 0;
    }
    let m = Matrix::from_columns(dim, vectors);
    smith(ring, &m, false)
        .valuations
        .iter()
        .map(|&s| ring.e - s)
        .sum()
}

/// Invariants (as exponents, largest first) of the subquotient `K / B` of
/// `R^dim` with `B ≤ K`.
pub fn subquotient_exponents(ring: &Ring, dim: usize, k: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<u32> {
    let log_b = span_log_order(ring, dim, b);
    // sizes[j] = log_p |p^j (K/B)|
    let mut sizes = vec![];
    for j in 0..=ring.e {
        let pj = ring.pow_p(j);
        let mut gens: Vec<Vec<u64>> = k
            .iter()
            .map(|v| v.iter().map(|&x| ring.mul(x, pj)).collect())
            .collect();
        gens.extend(b.iter().cloned());
        sizes.push(span_log_order(ring, dim, &gens) - log_b);
    }
    // count of cyclic factors of order at least p^{j+1}
    let at_least: Vec<u32> = (0..ring.e as usize).map(|j| sizes[j] - sizes[j + 1]).collect();
    let mut exps = vec![];
    for j in (0..ring.e as usize).rev() {
        let bigger = if j + 1 < at_least.len() { at_least[j + 1] } else { 0 };
        for _ in 0..(at_least[j] - bigger) {
            exps.push(j as u32 + 1);
        }
    }
    exps
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverses_mod_prime_powers() {
        let r = Ring::new(2, 5);
        for a in (1..32).step_by(2) {
            assert_eq!(r.mul(a, r.inv(a)), 1);
        }
        let r = Ring::new(3, 2);
        assert_eq!(r.mul(4, r.inv(4)), 1);
        assert_eq!(r.valuation(18), 2);
        assert_eq!(r.valuation(0), 2);
    }

    #[test]
    fn kernel_of_multiplication_by_two_mod_eight() {
        let r = Ring::new(2, 3);
        let a = Matrix::from_columns(1, &[vec![2]]);
        let k = kernel(&r, &a);
        assert_eq!(span_log_order(&r, 1, &k), 1);
    }

    #[test]
    fn subquotient_of_z8_by_z2() {
        let r = Ring::new(2, 3);
        let exps = subquotient_exponents(&r, 1, &[vec![1]], &[vec![4]]);
        assert_eq!(exps, vec![2]);
    }

    #[test]
    fn mixed_invariants() {
        let r = Ring::new(2, 3);
        // K = R^2, B = span((4, 0), (0, 2)) gives Z/4 × Z/2
        let exps = subquotient_exponents(&r, 2, &[vec![1, 0], vec![0, 1]], &[vec![4, 0], vec![0, 2]]);
        assert_eq!(exps, vec![2, 1]);
    }
}
