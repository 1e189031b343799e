//! Brute-force dependency radius of maps `{0,1}^V -> M^V`.

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest graph [`dependency_radius_at_most`] will enumerate.
pub const MAX_RADIUS_CHECK_N: usize = 20;

/// Whether every component `f_i` depends only on coordinates `x_j` with
/// `j ∈ N_{<=r}(i)`: checks all pairs of configurations differing in one
/// coordinate.
pub fn dependency_radius_at_most<T, F>(f: F, g: &Graph, r: usize) -> Result<bool>
where
    T: PartialEq,
    F: Fn(&Configuration) -> Vec<T>,
{
    let n = g.order();
    if n > MAX_RADIUS_CHECK_N {
        return Err(Error::capacity(format!(
            "dependency check enumerates 2^{n} states, limit is 2^{MAX_RADIUS_CHECK_N}"
        )));
    }
    let balls: Vec<u64> = (0..n).map(|v| g.ball_mask(v, r)).collect();
    let values: Vec<Vec<T>> = (0..1u64 << n)
        .map(|bits| f(&Configuration::raw(n, bits)))
        .collect();
    if let Some(v) = values.iter().find(|v| v.len() != n) {
        return Err(Error::domain(format!(
            "map returned {} components for {n} vertices",
            v.len()
        )));
    }
    for (x, fx) in values.iter().enumerate() {
        for j in 0..n {
            let y = x ^ (1 << j);
            if y < x {
                continue;
            }
            let fy = &values[y];
            for i in 0..n {
                if balls[i] >> j & 1 == 0 && fx[i] != fy[i] {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Smallest `r` for which [`dependency_radius_at_most`] holds.
pub fn dependency_radius<T, F>(f: F, g: &Graph) -> Result<usize>
where
    T: PartialEq,
    F: Fn(&Configuration) -> Vec<T>,
{
    let n = g.order();
    let f = &f;
    for r in 0..n {
        if dependency_radius_at_most(f, g, r)? {
            return Ok(r);
        }
    }
    Ok(n)
}
