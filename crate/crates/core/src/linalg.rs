//! Exact rank computations over the rationals for small integer matrices.

/// Incremental row echelon form over the integers. Rows are kept primitive
/// (content 1), so for 0/1 input of dimension at most 64 entries stay far
/// inside `i128`.
#[derive(Debug, Clone)]
pub struct IntegerEchelon {
    dim: usize,
    rows: Vec<(usize, Vec<i128>)>,
}

impl IntegerEchelon {
    pub fn new(dim: usize) -> Self {
        IntegerEchelon { dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the current rows; keeps it if it is independent.
    /// Returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<i128>) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        for (pivot, row) in &self.rows {
            let coeff = v[*pivot];
            if coeff == 0 {
                continue;
            }
            let lead = row[*pivot];
            for (x, &y) in v.iter_mut().zip(row) {
                *x = x
                    .checked_mul(lead)
                    .and_then(|a| coeff.checked_mul(y).and_then(|b| a.checked_sub(b)))
                    .expect("integer echelon overflow");
            }
            make_primitive(&mut v);
        }
        match v.iter().position(|&x| x != 0) {
            Some(pivot) => {
                self.rows.push((pivot, v));
                true
            }
            None => false,
        }
    }
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn make_primitive(v: &mut [i128]) {
    let g = v.iter().fold(0, |g, &x| gcd(g, x));
    if g > 1 {
        v.iter_mut().for_each(|x| *x /= g);
    }
}

/// Affine dimension of a point set: the rank of the differences to the first
/// point. `None` for the empty set. Stops early once `stop_at` is reached.
pub fn affine_dimension<'a, I>(points: I, stop_at: Option<usize>) -> Option<usize>
where
    I: IntoIterator<Item = &'a [i128]>,
{
    let mut iter = points.into_iter();
    let origin = iter.next()?;
    let mut echelon = IntegerEchelon::new(origin.len());
    for p in iter {
        if stop_at.is_some_and(|s| echelon.rank() >= s) {
            break;
        }
        echelon.insert(p.iter().zip(origin).map(|(a, b)| a - b).collect());
    }
    Some(echelon.rank())
}
