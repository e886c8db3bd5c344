//! Big-endian base-`d` codec between assignments and basis indices.
//!
//! Variable 1 is the most significant digit: `y = sum_b x_b * d^(n-1-b)`.
//! Every register in the crate uses this single convention.

use crate::error::{Error, Result};

pub fn encode_assignment(assignment: &[usize], n: usize, d: usize) -> Result<usize> {
    if assignment.len() != n {
        return Err(Error::AssignmentLength { expected: n, found: assignment.len() });
    }
    assignment.iter().enumerate().try_fold(0usize, |y, (position, &x)| {
        if x >= d {
            Err(Error::AssignmentOutOfRange { position, value: x, max: d - 1 })
        } else {
            Ok(y * d + x)
        }
    })
}

pub fn decode_index(y: usize, n: usize, d: usize) -> Result<Vec<usize>> {
    let size = (d as u128).saturating_pow(n as u32);
    if y as u128 >= size {
        return Err(Error::IndexOutOfRange { index: y, size: size.min(usize::MAX as u128) as usize });
    }
    let mut out = vec![0; n];
    decode_into(y, d, &mut out);
    Ok(out)
}

/// Writes the digits of `y` into `out` (length n) without range checks.
pub(crate) fn decode_into(mut y: usize, d: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = y % d;
        y /= d;
    }
}

/// Iterates over every assignment of `{0..d-1}^n` in increasing index order.
#[derive(Debug, Clone)]
pub struct AssignmentIter {
    current: Option<Vec<usize>>,
    d: usize,
}

impl AssignmentIter {
    pub fn new(n: usize, d: usize) -> Self {
        AssignmentIter { current: (d > 0).then(|| vec![0; n]), d }
    }
}

impl Iterator for AssignmentIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let cur = self.current.as_mut().unwrap();
        let mut i = cur.len();
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < self.d {
                break;
            }
            cur[i] = 0;
        }
        Some(out)
    }
}
