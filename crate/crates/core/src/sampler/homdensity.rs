//! Homomorphism densities of five small motifs via matrix identities.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::exact::Rational;
use crate::graph::Graph;
use crate::graphon::StepGraphon;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Motif {
    K2,
    P3,
    K3,
    C4,
    P4,
}

impl Motif {
    pub const ALL: [Motif; 5] = [Motif::K2, Motif::P3, Motif::K3, Motif::C4, Motif::P4];

    pub fn vertices(self) -> u32 {
        match self {
            Motif::K2 => 2,
            Motif::P3 | Motif::K3 => 3,
            Motif::C4 | Motif::P4 => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Motif::K2 => "K2",
            Motif::P3 => "P3",
            Motif::K3 => "K3",
            Motif::C4 => "C4",
            Motif::P4 => "P4",
        }
    }
}

impl FromStr for Motif {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Motif::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::Precondition(format!(
                    "unknown motif `{s}` (expected K2, P3, K3, C4 or P4)"
                ))
            })
    }
}

/// `t(F, G) = hom(F, G) / n^{|V(F)|}` with
/// `hom(K2) = 1'A1`, `hom(P3) = 1'A^2 1`, `hom(K3) = tr A^3`,
/// `hom(C4) = tr A^4` and `hom(P4) = 1'A^3 1`.
pub fn hom_density_graph(f: Motif, g: &Graph) -> Rational {
    let n = g.n();
    let deg: Vec<i128> = (0..n).map(|v| g.degree(v) as i128).collect();
    let a2 = || {
        let mut sq = vec![0i128; n * n];
        for i in 0..n {
            for &k in g.neighbors(i) {
                for &j in g.neighbors(k) {
                    sq[i * n + j] += 1;
                }
            }
        }
        sq
    };
    let hom: i128 = match f {
        Motif::K2 => deg.iter().sum(),
        Motif::P3 => deg.iter().map(|d| d * d).sum(),
        Motif::K3 => {
            let sq = a2();
            g.edges().iter().map(|&(u, v)| 2 * sq[u * n + v]).sum()
        }
        Motif::C4 => a2().iter().map(|x| x * x).sum(),
        Motif::P4 => g.edges().iter().map(|&(u, v)| 2 * deg[u] * deg[v]).sum(),
    };
    if n == 0 {
        return Rational::from_integer(0);
    }
    Rational::new(hom, (n as i128).pow(f.vertices()))
}

/// `t(F, w)` for a step graphon, through `M = values / n`:
/// `t(K2) = 1'M1 / n`, `t(P3) = 1'M^2 1 / n`, `t(K3) = tr M^3`,
/// `t(C4) = tr M^4` and `t(P4) = 1'M^3 1 / n`.
pub fn hom_density_graphon(f: Motif, w: &StepGraphon) -> f64 {
    let n = w.n();
    let nf = n as f64;
    let m: Vec<f64> = w.values().iter().map(|v| v / nf).collect();
    let mul = |a: &[f64], b: &[f64]| {
        let mut c = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = a[i * n + k];
                for j in 0..n {
                    c[i * n + j] += aik * b[k * n + j];
                }
            }
        }
        c
    };
    let trace = |a: &[f64]| (0..n).map(|i| a[i * n + i]).sum::<f64>();
    let total = |a: &[f64]| a.iter().sum::<f64>();
    match f {
        Motif::K2 => total(&m) / nf,
        Motif::P3 => total(&mul(&m, &m)) / nf,
        Motif::K3 => trace(&mul(&mul(&m, &m), &m)),
        Motif::C4 => {
            let sq = mul(&m, &m);
            trace(&mul(&sq, &sq))
        }
        Motif::P4 => total(&mul(&mul(&m, &m), &m)) / nf,
    }
}
