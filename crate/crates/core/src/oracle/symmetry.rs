//! Signed axis permutations of an index box about its centre.

/// One element of the cube group acting on index triples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Op {
    perm: [usize; 3],
    flip: [bool; 3],
}

impl Op {
    pub(crate) const IDENTITY: Op = Op { perm: [0, 1, 2], flip: [false; 3] };

    #[inline]
    pub(crate) fn apply(&self, dims: [usize; 3], c: [usize; 3]) -> [usize; 3] {
        let mut out = [0; 3];
        for a in 0..3 {
            let v = c[self.perm[a]];
            out[a] = if self.flip[a] { dims[a] - 1 - v } else { v };
        }
        out
    }
}

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// All 48 signed permutations compatible with `dims`.
pub(crate) fn candidates(dims: [usize; 3]) -> Vec<Op> {
    let mut out = Vec::new();
    for perm in PERMS {
        if (0..3).any(|a| dims[a] != dims[perm[a]]) {
            continue;
        }
        for bits in 0..8u8 {
            out.push(Op { perm, flip: [bits & 1 != 0, bits & 2 != 0, bits & 4 != 0] });
        }
    }
    out
}

#[inline]
pub(crate) fn linear(dims: [usize; 3], c: [usize; 3]) -> usize {
    (c[0] * dims[1] + c[1]) * dims[2] + c[2]
}

/// Operations leaving every array in `data` invariant to within `rel_tol`
/// of its largest magnitude.
pub(crate) fn invariant_ops(dims: [usize; 3], data: &[&[f64]], rel_tol: f64) -> Vec<Op> {
    let scales: Vec<f64> = data.iter().map(|d| d.iter().fold(0.0f64, |m, v| m.max(v.abs()))).collect();
    candidates(dims)
        .into_iter()
        .filter(|op| {
            if *op == Op::IDENTITY {
                return true;
            }
            for i in 0..dims[0] {
                for j in 0..dims[1] {
                    for k in 0..dims[2] {
                        let c = [i, j, k];
                        let src = linear(dims, c);
                        let dst = linear(dims, op.apply(dims, c));
                        for (d, s) in data.iter().zip(&scales) {
                            if (d[src] - d[dst]).abs() > rel_tol * s {
                                return false;
                            }
                        }
                    }
                }
            }
            true
        })
        .collect()
}

/// Orbit representatives of cells where `keep` holds, with orbit sizes,
/// in ascending index order.
pub(crate) fn orbits<F: Fn(usize) -> bool>(dims: [usize; 3], ops: &[Op], keep: F) -> Vec<(usize, f64)> {
    let n = dims[0] * dims[1] * dims[2];
    let mut seen = vec![false; n];
    let mut reps = Vec::new();
    let mut images = Vec::with_capacity(ops.len());
    for i in 0..dims[0] {
        for j in 0..dims[1] {
            for k in 0..dims[2] {
                let c = [i, j, k];
                let idx = linear(dims, c);
                if seen[idx] || !keep(idx) {
                    continue;
                }
                images.clear();
                for op in ops {
                    let m = linear(dims, op.apply(dims, c));
                    if !images.contains(&m) {
                        images.push(m);
                    }
                }
                for &m in &images {
                    seen[m] = true;
                }
                reps.push((idx, images.len() as f64));
            }
        }
    }
    reps
}
