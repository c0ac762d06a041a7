//! Globally adaptive 21-point Gauss-Kronrod quadrature of vector-valued
//! complex integrands over a set of real parameter intervals.
//!
//! Each panel carries the Kronrod estimate and |K21 − G10| per component;
//! the panel with the largest error is bisected until every component meets
//! `rel_tol * |I|` or its absolute floor.

// Nodes and weights keep their published digits.
#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077715535398702,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

// Gauss weights for XGK[1], XGK[3], .., XGK[9]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub rel: f64,
    /// Absolute floor per component, used when |I| is tiny.
    pub abs: f64,
    pub max_subdivisions: usize,
}

#[derive(Debug, Clone)]
pub struct Integral<const N: usize> {
    pub value: [Complex64; N],
    pub error: [f64; N],
    pub subdivisions: usize,
    pub evaluations: usize,
}

struct Panel<const N: usize> {
    a: f64,
    b: f64,
    value: [Complex64; N],
    error: [f64; N],
    // error normalised by the component targets of the first estimate
    priority: f64,
}

impl<const N: usize> PartialEq for Panel<N> {
    fn eq(&self, other: &Self) -> bool {
        self.priority == other.priority
    }
}
impl<const N: usize> Eq for Panel<N> {}
impl<const N: usize> PartialOrd for Panel<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<const N: usize> Ord for Panel<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.priority.total_cmp(&other.priority)
    }
}

fn gauss_kronrod<const N: usize, F>(f: &mut F, a: f64, b: f64) -> Result<([Complex64; N], [f64; N])>
where
    F: FnMut(f64) -> Result<[Complex64; N]>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let zero = Complex64::new(0.0, 0.0);
    let mut kronrod = [zero; N];
    let mut gauss = [zero; N];

    let fc = f(center)?;
    for c in 0..N {
        kronrod[c] = fc[c] * WGK[10];
    }
    for (i, (&x, &w)) in XGK[..10].iter().zip(&WGK[..10]).enumerate() {
        let dx = half * x;
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        for c in 0..N {
            let s = f1[c] + f2[c];
            kronrod[c] += s * w;
            if i % 2 == 1 {
                gauss[c] += s * WG[i / 2];
            }
        }
    }
    let mut error = [0.0; N];
    for c in 0..N {
        kronrod[c] *= half;
        gauss[c] *= half;
        error[c] = (kronrod[c] - gauss[c]).norm();
        if !(kronrod[c].re.is_finite() && kronrod[c].im.is_finite()) {
            return Err(Error::Degenerate {
                context: "quadrature panel",
                k_par: format!("t in [{a}, {b}]"),
            });
        }
    }
    Ok((kronrod, error))
}

/// Integrates `f` over the union of `intervals` (each `(a, b)` with a < b).
pub fn integrate<const N: usize, F>(mut f: F, intervals: &[(f64, f64)], tol: Tolerance) -> Result<Integral<N>>
where
    F: FnMut(f64) -> Result<[Complex64; N]>,
{
    let zero = Complex64::new(0.0, 0.0);
    let mut heap: BinaryHeap<Panel<N>> = BinaryHeap::new();
    let mut evaluations = 0usize;
    let mut initial = Vec::with_capacity(intervals.len());
    for &(a, b) in intervals {
        if !(b > a) {
            continue;
        }
        let (value, error) = gauss_kronrod(&mut f, a, b)?;
        evaluations += 21;
        initial.push((a, b, value, error));
    }

    let mut total = [zero; N];
    let mut total_err = [0.0; N];
    for (_, _, v, e) in &initial {
        for c in 0..N {
            total[c] += v[c];
            total_err[c] += e[c];
        }
    }
    let targets = |total: &[Complex64; N]| {
        let mut t = [0.0; N];
        for c in 0..N {
            t[c] = (tol.rel * total[c].norm()).max(tol.abs);
        }
        t
    };
    let mut scale = targets(&total);
    let priority = |e: &[f64; N], s: &[f64; N]| {
        e.iter()
            .zip(s)
            .map(|(e, s)| {
                if *s > 0.0 {
                    e / s
                } else if *e > 0.0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            })
            .fold(0.0, f64::max)
    };
    for (a, b, value, error) in initial {
        heap.push(Panel {
            a,
            b,
            value,
            error,
            priority: priority(&error, &scale),
        });
    }

    let mut subdivisions = 0usize;
    loop {
        let target = targets(&total);
        if total_err.iter().zip(&target).all(|(e, t)| e <= t) {
            break;
        }
        if subdivisions >= tol.max_subdivisions {
            return Err(Error::NoConvergence {
                subdivisions,
                error_estimate: total_err.iter().copied().fold(0.0, f64::max),
            });
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            return Err(Error::NoConvergence {
                subdivisions,
                error_estimate: total_err.iter().copied().fold(0.0, f64::max),
            });
        }
        let (v1, e1) = gauss_kronrod(&mut f, worst.a, mid)?;
        let (v2, e2) = gauss_kronrod(&mut f, mid, worst.b)?;
        evaluations += 42;
        subdivisions += 1;
        for c in 0..N {
            total[c] += v1[c] + v2[c] - worst.value[c];
            total_err[c] += e1[c] + e2[c] - worst.error[c];
        }
        // refresh the normalisation occasionally so priorities track the
        // current magnitudes
        if subdivisions.is_multiple_of(64) {
            scale = targets(&total);
            let panels: Vec<Panel<N>> = heap.drain().collect();
            for mut p in panels {
                p.priority = priority(&p.error, &scale);
                heap.push(p);
            }
        }
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
            priority: priority(&e1, &scale),
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
            priority: priority(&e2, &scale),
        });
    }

    // resum to shed accumulated rounding from the running updates
    let mut value = [zero; N];
    let mut error = [0.0; N];
    for p in heap.iter() {
        for c in 0..N {
            value[c] += p.value[c];
            error[c] += p.error[c];
        }
    }
    Ok(Integral {
        value,
        error,
        subdivisions,
        evaluations,
    })
}
