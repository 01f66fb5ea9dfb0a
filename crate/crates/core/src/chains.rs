//! Chain complexes over F₂ and the linear algebra behind them.
//!
//! Matrices are column-major with bit-packed columns; ranks come from plain
//! Gaussian elimination (first-nonzero pivoting, nothing fancier). Homology
//! in degree `d` needs the boundary out of degree `d+1`, so a complex whose
//! top tracked degree is `top` has reliable Betti numbers only for
//! `d < top`.

use crate::{Error, Result};

/// Bit-packed vector over F₂.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Bits {
    len: usize,
    words: Vec<u64>,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Bits { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut b = Bits::zeros(len);
        for &i in indices {
            b.set(i, true);
        }
        b
    }

    pub fn unit(len: usize, i: usize) -> Self {
        Bits::from_indices(len, &[i])
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        debug_assert!(i < self.len);
        if v {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &Bits) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the highest set bit.
    pub fn last_one(&self) -> Option<usize> {
        for (w, &word) in self.words.iter().enumerate().rev() {
            if word != 0 {
                return Some(w * 64 + 63 - word.leading_zeros() as usize);
            }
        }
        None
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    None
                } else {
                    let b = word.trailing_zeros() as usize;
                    word &= word - 1;
                    Some(w * 64 + b)
                }
            })
        })
    }
}

impl std::fmt::Debug for Bits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", self.get(i) as u8)?;
        }
        Ok(())
    }
}

/// Column-major F₂ matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct F2Matrix {
    rows: usize,
    cols: Vec<Bits>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, ncols: usize) -> Self {
        F2Matrix { rows, cols: vec![Bits::zeros(rows); ncols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = F2Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_columns(rows: usize, cols: Vec<Bits>) -> Self {
        assert!(cols.iter().all(|c| c.len() == rows));
        F2Matrix { rows, cols }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.cols[c].get(r)
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        self.cols[c].set(r, v)
    }

    pub fn column(&self, c: usize) -> &Bits {
        &self.cols[c]
    }

    pub fn push_column(&mut self, c: Bits) {
        assert_eq!(c.len(), self.rows);
        self.cols.push(c);
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Bits::is_zero)
    }

    /// Matrix-vector product; `v` indexes our columns.
    pub fn apply(&self, v: &Bits) -> Bits {
        assert_eq!(v.len(), self.ncols());
        let mut out = Bits::zeros(self.rows);
        for j in v.ones() {
            out.xor_assign(&self.cols[j]);
        }
        out
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &F2Matrix) -> F2Matrix {
        assert_eq!(self.ncols(), rhs.nrows());
        let cols = rhs.cols.iter().map(|c| self.apply(c)).collect();
        F2Matrix::from_columns(self.rows, cols)
    }

    pub fn hstack(&self, rhs: &F2Matrix) -> F2Matrix {
        assert_eq!(self.rows, rhs.rows);
        let mut cols = self.cols.clone();
        cols.extend(rhs.cols.iter().cloned());
        F2Matrix::from_columns(self.rows, cols)
    }

    pub fn rank(&self) -> usize {
        let mut pivots: Vec<Option<usize>> = vec![None; self.rows];
        let mut reduced: Vec<Bits> = Vec::new();
        let mut rank = 0;
        for col in &self.cols {
            let mut c = col.clone();
            while let Some(p) = c.last_one() {
                match pivots[p] {
                    Some(idx) => c.xor_assign(&reduced[idx]),
                    None => {
                        pivots[p] = Some(reduced.len());
                        reduced.push(c);
                        rank += 1;
                        break;
                    }
                }
            }
        }
        rank
    }

    /// A basis of `ker(self)`, as vectors over the column space.
    pub fn kernel_basis(&self) -> Vec<Bits> {
        let n = self.ncols();
        let mut pivots: Vec<Option<usize>> = vec![None; self.rows];
        let mut reduced: Vec<(Bits, Bits)> = Vec::new(); // (column, combination)
        let mut kernel = Vec::new();
        for (j, col) in self.cols.iter().enumerate() {
            let mut c = col.clone();
            let mut t = Bits::unit(n, j);
            loop {
                match c.last_one() {
                    None => {
                        kernel.push(t);
                        break;
                    }
                    Some(p) => match pivots[p] {
                        Some(idx) => {
                            let (rc, rt) = &reduced[idx];
                            c.xor_assign(rc);
                            t.xor_assign(rt);
                        }
                        None => {
                            pivots[p] = Some(reduced.len());
                            reduced.push((c, t));
                            break;
                        }
                    },
                }
            }
        }
        kernel
    }
}

impl std::fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "F2Matrix {}x{}", self.rows, self.ncols())?;
        for r in 0..self.rows {
            for c in 0..self.ncols() {
                write!(f, "{}", self.get(r, c) as u8)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A bounded chain complex over F₂.
///
/// `boundaries[d]` is ∂_d : C_d → C_{d−1}; `boundaries[0]` has zero rows.
/// `labels[d]` names the degree-d basis cells (canonical order).
#[derive(Clone)]
pub struct ChainComplex {
    pub boundaries: Vec<F2Matrix>,
    pub labels: Vec<Vec<String>>,
}

impl ChainComplex {
    /// Validates shapes, label counts, and ∂∘∂ = 0.
    pub fn new(boundaries: Vec<F2Matrix>, labels: Vec<Vec<String>>) -> Result<Self> {
        if boundaries.is_empty() {
            return Err(Error::Shape("chain complex needs at least degree 0".into()));
        }
        if boundaries[0].nrows() != 0 {
            return Err(Error::Shape("boundary of degree 0 must have zero rows".into()));
        }
        if labels.len() != boundaries.len() {
            return Err(Error::Shape("labels/boundaries length mismatch".into()));
        }
        for d in 0..boundaries.len() {
            if labels[d].len() != boundaries[d].ncols() {
                return Err(Error::Shape(format!("degree {d}: label count != cell count")));
            }
            if d > 0 && boundaries[d].nrows() != boundaries[d - 1].ncols() {
                return Err(Error::Shape(format!("degree {d}: boundary row count mismatch")));
            }
            if d > 1 && !boundaries[d - 1].mul(&boundaries[d]).is_zero() {
                return Err(Error::Shape(format!("∂∘∂ ≠ 0 between degrees {d} and {}", d - 2)));
            }
        }
        Ok(ChainComplex { boundaries, labels })
    }

    /// Top tracked degree. Betti numbers are reliable strictly below it.
    pub fn top(&self) -> usize {
        self.boundaries.len() - 1
    }

    /// Number of cells in degree `d` (0 beyond the tracked range).
    pub fn dim(&self, d: usize) -> usize {
        self.boundaries.get(d).map_or(0, F2Matrix::ncols)
    }

    pub fn total_cells(&self) -> usize {
        self.boundaries.iter().map(F2Matrix::ncols).sum()
    }
}

/// Betti numbers indexed by degree.
pub type BettiVector = Vec<usize>;

/// Betti numbers for degrees `0..top` (the top tracked degree is omitted:
/// its incoming boundary is unknown). `reduced` subtracts the augmentation
/// component in degree 0 when the complex is nonempty.
pub fn betti(c: &ChainComplex, reduced: bool) -> BettiVector {
    let ranks: Vec<usize> = c.boundaries.iter().map(F2Matrix::rank).collect();
    let mut out = Vec::with_capacity(c.top());
    for d in 0..c.top() {
        out.push(c.dim(d) - ranks[d] - ranks[d + 1]);
    }
    if reduced && c.dim(0) > 0 {
        if let Some(b0) = out.first_mut() {
            *b0 -= 1;
        }
    }
    out
}

/// Relative Betti numbers of the pair `(K, L)`, where `l_cells[d]` selects
/// the degree-d cells of `K` spanning the subcomplex `L` (by basis index).
/// Computed from the quotient complex `C(K)/C(L)`.
pub fn relative_betti(k: &ChainComplex, l_cells: &[Vec<usize>]) -> Result<BettiVector> {
    let top = k.top();
    // Membership masks, validated.
    let mut in_l: Vec<Bits> = Vec::with_capacity(top + 1);
    for d in 0..=top {
        let sel = l_cells.get(d).map_or(&[][..], Vec::as_slice);
        let mut mask = Bits::zeros(k.dim(d));
        for &i in sel {
            if i >= k.dim(d) {
                return Err(Error::NotSubcomplex(format!("degree {d}: cell index {i} out of range")));
            }
            mask.set(i, true);
        }
        in_l.push(mask);
    }
    // L must be closed under the boundary.
    for d in 1..=top {
        for j in in_l[d].ones() {
            for r in k.boundaries[d].column(j).ones() {
                if !in_l[d - 1].get(r) {
                    return Err(Error::NotSubcomplex(format!(
                        "degree {d}: boundary of selected cell {j} leaves the selection"
                    )));
                }
            }
        }
    }
    // Quotient: keep complement cells, restrict boundaries to complement rows.
    let keep: Vec<Vec<usize>> = (0..=top)
        .map(|d| (0..k.dim(d)).filter(|&i| !in_l[d].get(i)).collect())
        .collect();
    let mut boundaries = Vec::with_capacity(top + 1);
    let mut labels = Vec::with_capacity(top + 1);
    for d in 0..=top {
        let rows = if d == 0 { 0 } else { keep[d - 1].len() };
        let mut m = F2Matrix::zeros(rows, keep[d].len());
        if d > 0 {
            let row_of: std::collections::HashMap<usize, usize> =
                keep[d - 1].iter().enumerate().map(|(new, &old)| (old, new)).collect();
            for (new_j, &old_j) in keep[d].iter().enumerate() {
                for r in k.boundaries[d].column(old_j).ones() {
                    if let Some(&new_r) = row_of.get(&r) {
                        m.set(new_r, new_j, true);
                    }
                }
            }
        }
        labels.push(keep[d].iter().map(|&i| k.labels[d][i].clone()).collect());
        boundaries.push(m);
    }
    Ok(betti(&ChainComplex::new(boundaries, labels)?, false))
}

/// A degreewise-matrix chain map; `maps[d]` sends degree-d chains of the
/// source to degree-d chains of the target.
#[derive(Clone)]
pub struct ChainMap {
    pub maps: Vec<F2Matrix>,
}

impl ChainMap {
    /// First degree where ∂∘f ≠ f∘∂, if any.
    pub fn commutation_failure(&self, a: &ChainComplex, b: &ChainComplex) -> Option<usize> {
        for d in 0..self.maps.len() {
            if self.maps[d].nrows() != b.dim(d) || self.maps[d].ncols() != a.dim(d) {
                return Some(d);
            }
            if d > 0 {
                let left = b.boundaries[d].mul(&self.maps[d]);
                let right = self.maps[d - 1].mul(&a.boundaries[d]);
                if left != right {
                    return Some(d);
                }
            }
        }
        None
    }

    pub fn is_chain_map(&self, a: &ChainComplex, b: &ChainComplex) -> bool {
        self.maps.len() == (a.top().min(b.top()) + 1) && self.commutation_failure(a, b).is_none()
    }
}

/// Mapping cone of `f : A → B`: Cone_d = A_{d−1} ⊕ B_d with
/// ∂(a, b) = (∂a, f(a) + ∂b). Errors if `f` fails the chain-map law.
pub fn mapping_cone(f: &ChainMap, a: &ChainComplex, b: &ChainComplex) -> Result<ChainComplex> {
    if let Some(d) = f.commutation_failure(a, b) {
        return Err(Error::NotChainMap { degree: d });
    }
    let top = (a.top() + 1).min(b.top()).min(f.maps.len());
    let mut boundaries = Vec::with_capacity(top + 1);
    let mut labels = Vec::with_capacity(top + 1);
    for d in 0..=top {
        let na = if d == 0 { 0 } else { a.dim(d - 1) };
        let nb = b.dim(d);
        let rows_a = if d < 2 { 0 } else { a.dim(d - 2) };
        let rows_b = if d == 0 { 0 } else { b.dim(d - 1) };
        let rows = rows_a + rows_b;
        let mut m = F2Matrix::zeros(rows, na + nb);
        for j in 0..na {
            // (∂_A a, f a), with the A-block stacked above the B-block.
            if d >= 2 {
                for r in a.boundaries[d - 1].column(j).ones() {
                    m.set(r, j, true);
                }
            }
            for r in f.maps[d - 1].column(j).ones() {
                m.set(rows_a + r, j, true);
            }
        }
        for j in 0..nb {
            if d >= 1 {
                for r in b.boundaries[d].column(j).ones() {
                    m.set(rows_a + r, na + j, true);
                }
            }
        }
        let mut lab: Vec<String> = Vec::with_capacity(na + nb);
        if d > 0 {
            lab.extend(a.labels[d - 1].iter().map(|s| format!("A:{s}")));
        }
        lab.extend(b.labels[d].iter().map(|s| format!("B:{s}")));
        boundaries.push(m);
        labels.push(lab);
    }
    ChainComplex::new(boundaries, labels)
}

/// Whether `f` induces isomorphisms on homology in every reliable degree,
/// decided by acyclicity of its mapping cone.
pub fn is_quasi_iso(f: &ChainMap, a: &ChainComplex, b: &ChainComplex) -> Result<bool> {
    let cone = mapping_cone(f, a, b)?;
    Ok(betti(&cone, false).iter().all(|&x| x == 0))
}

/// Rank of the induced map H_d(f) : H_d(A) → H_d(B), computed as
/// dim((f(Z_d) + B_d) / B_d). Requires `d` strictly below both tops.
pub fn induced_map_rank(f: &ChainMap, a: &ChainComplex, b: &ChainComplex, d: usize) -> usize {
    assert!(d < a.top() && d < b.top(), "degree {d} not reliable here");
    let cycles = a.boundaries[d].kernel_basis();
    let mut m = b.boundaries[d + 1].clone();
    let base = m.rank();
    for z in &cycles {
        m.push_column(f.maps[d].apply(z));
    }
    m.rank() - base
}

/// Dense integer matrix (row-major) for exact cross-checks.
#[derive(Clone, Debug)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        assert_eq!(self.cols, rhs.rows);
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for c in 0..rhs.cols {
                let mut acc: i64 = 0;
                for k in 0..self.cols {
                    let term = self.get(r, k).checked_mul(rhs.get(k, c)).ok_or(Error::Overflow)?;
                    acc = acc.checked_add(term).ok_or(Error::Overflow)?;
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }
}

/// Nonzero invariant factors d₁ | d₂ | … of an integer matrix, all positive.
/// Fails with `Error::Overflow` rather than returning wrong answers.
pub fn smith_normal_form(m: &IntMatrix) -> Result<Vec<i64>> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // Smallest nonzero entry in the remaining block becomes the pivot.
        let mut pivot: Option<(usize, usize)> = None;
        for r in t..rows {
            for c in t..cols {
                let v = a.get(r, c);
                if v != 0 && pivot.is_none_or(|(pr, pc)| v.abs() < a.get(pr, pc).abs()) {
                    pivot = Some((r, c));
                }
            }
        }
        let Some((pr, pc)) = pivot else { break };
        swap_rows(&mut a, t, pr);
        swap_cols(&mut a, t, pc);
        // Reduce the pivot row and column; restart if a remainder shrinks
        // below the pivot.
        let mut clean = true;
        for r in t + 1..rows {
            let q = a.get(r, t).div_euclid(a.get(t, t));
            if q != 0 {
                row_axpy(&mut a, r, t, -q)?;
            }
            if a.get(r, t) != 0 {
                clean = false;
            }
        }
        for c in t + 1..cols {
            let q = a.get(t, c).div_euclid(a.get(t, t));
            if q != 0 {
                col_axpy(&mut a, c, t, -q)?;
            }
            if a.get(t, c) != 0 {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // Pivot must divide every remaining entry; fold an offender into the
        // pivot column and continue.
        let p = a.get(t, t);
        let offender = (t + 1..rows)
            .flat_map(|r| (t + 1..cols).map(move |c| (r, c)))
            .find(|&(r, c)| a.get(r, c) % p != 0);
        if let Some((r, _)) = offender {
            row_axpy(&mut a, t, r, 1)?;
            continue;
        }
        t += 1;
    }
    let mut divisors: Vec<i64> = (0..t).map(|i| a.get(i, i).abs()).collect();
    divisors.sort_unstable();
    Ok(divisors)
}

fn swap_rows(a: &mut IntMatrix, r1: usize, r2: usize) {
    if r1 == r2 {
        return;
    }
    for c in 0..a.cols {
        let (x, y) = (a.get(r1, c), a.get(r2, c));
        a.set(r1, c, y);
        a.set(r2, c, x);
    }
}

fn swap_cols(a: &mut IntMatrix, c1: usize, c2: usize) {
    if c1 == c2 {
        return;
    }
    for r in 0..a.rows {
        let (x, y) = (a.get(r, c1), a.get(r, c2));
        a.set(r, c1, y);
        a.set(r, c2, x);
    }
}

fn row_axpy(a: &mut IntMatrix, dst: usize, src: usize, factor: i64) -> Result<()> {
    for c in 0..a.cols {
        let term = a.get(src, c).checked_mul(factor).ok_or(Error::Overflow)?;
        let v = a.get(dst, c).checked_add(term).ok_or(Error::Overflow)?;
        a.set(dst, c, v);
    }
    Ok(())
}

fn col_axpy(a: &mut IntMatrix, dst: usize, src: usize, factor: i64) -> Result<()> {
    for r in 0..a.rows {
        let term = a.get(r, src).checked_mul(factor).ok_or(Error::Overflow)?;
        let v = a.get(r, dst).checked_add(term).ok_or(Error::Overflow)?;
        a.set(r, dst, v);
    }
    Ok(())
}

/// Integer homology from exact boundary matrices: per degree `d < top`,
/// the free rank and the torsion divisors (> 1) of H_d(ℤ).
pub fn integer_homology(boundaries: &[IntMatrix]) -> Result<Vec<(usize, Vec<i64>)>> {
    for d in 2..boundaries.len() {
        if !boundaries[d - 1].mul(&boundaries[d])?.is_zero() {
            return Err(Error::Shape(format!("integer ∂∘∂ ≠ 0 into degree {}", d - 2)));
        }
    }
    let snfs: Vec<Vec<i64>> = boundaries.iter().map(smith_normal_form).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for d in 0..boundaries.len().saturating_sub(1) {
        let n = boundaries[d].cols;
        let rank_d = snfs[d].len();
        let rank_up = snfs[d + 1].len();
        let torsion: Vec<i64> = snfs[d + 1].iter().copied().filter(|&x| x > 1).collect();
        out.push((n - rank_d - rank_up, torsion));
    }
    Ok(out)
}
