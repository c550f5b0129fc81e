//! Bimodule radical profiles, distributivity, critical pairs and the three-way type test.

use serde::Serialize;

use crate::algebra::Algebra;
use crate::error::Error;
use crate::linalg::{unit, Echelon, SVec};
use crate::quiver::Path;

/// Layer dimensions dim(rad^i / rad^{i+1}) of the bimodule e_target A e_source.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BimoduleProfile {
    pub source: usize,
    pub target: usize,
    pub dims: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalPair {
    pub a: usize,
    pub z: usize,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Distributive,
    Type1,
    Type2,
    Type3,
    NotMinimalNonDistributive { condition: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrichotomyReport {
    pub verdict: Verdict,
    pub critical_pair: Option<CriticalPair>,
    pub socle_dim: usize,
}

pub fn profiles(a: &Algebra) -> Vec<BimoduleProfile> {
    a.radical_power_dims()
        .into_iter()
        .map(|((x, y), dims)| BimoduleProfile {
            source: x,
            target: y,
            dims: dims.windows(2).map(|w| w[0] - w[1]).collect(),
        })
        .collect()
}

/// True iff every layer of every bimodule e_y A e_x has dimension at most 1.
pub fn is_distributive(a: &Algebra) -> (bool, Vec<BimoduleProfile>) {
    let ps = profiles(a);
    let ok = ps.iter().all(|p| p.dims.iter().all(|&d| d <= 1));
    (ok, ps)
}

pub fn critical_pairs(a: &Algebra) -> Vec<CriticalPair> {
    profiles(a)
        .into_iter()
        .filter_map(|p| {
            p.dims.iter().position(|&d| d >= 2).map(|i| CriticalPair { a: p.source, z: p.target, index: i })
        })
        .collect()
}

/// Vertices x with dim e_x A e_x ≥ 2.
pub fn thick_points(a: &Algebra) -> Vec<usize> {
    (0..a.quiver.num_vertices()).filter(|&x| a.pair_dim(x, x) >= 2).collect()
}

/// True iff every path of length 2 passing through x is zero.
pub fn is_node(a: &Algebra, x: usize) -> bool {
    let q = &a.quiver;
    q.in_arrows(x).iter().all(|&al| {
        q.out_arrows(x).iter().all(|&be| a.path_vec(&q.path(&[al, be]).unwrap()).is_empty())
    })
}

pub fn socle_echelon(a: &Algebra) -> Echelon {
    let mut e = Echelon::new(a.field);
    for s in a.socle() {
        e.insert(&s.coords);
    }
    e
}

pub const DEFAULT_PATH_CAP: usize = 100_000;

/// Nonzero paths whose image lies in the socle.
pub fn long_paths(a: &Algebra, cap: usize) -> Result<Vec<Path>, Error> {
    let soc = socle_echelon(a);
    Ok(a.nonzero_paths(cap)?.into_iter().filter(|(_, v)| soc.contains(v)).map(|(p, _)| p).collect())
}

fn fail(cp: CriticalPair, socle_dim: usize, condition: &str) -> TrichotomyReport {
    TrichotomyReport {
        verdict: Verdict::NotMinimalNonDistributive { condition: condition.to_string() },
        critical_pair: Some(cp),
        socle_dim,
    }
}

fn radical_part(a: &Algebra, x: usize, y: usize) -> Vec<usize> {
    a.pair_basis(x, y).iter().copied().filter(|&i| !a.basis()[i].is_empty()).collect()
}

/// Checks the necessary structure of a non-distributive minimal representation-infinite
/// algebra and sorts it into one of three types.
pub fn trichotomy(a: &Algebra) -> TrichotomyReport {
    let socle = a.socle();
    let sd = socle.len();
    let cps = critical_pairs(a);
    if cps.is_empty() {
        return TrichotomyReport { verdict: Verdict::Distributive, critical_pair: None, socle_dim: sd };
    }
    let cp = cps[0];
    if cps.len() > 1 {
        return fail(cp, sd, "more than one critical pair");
    }
    let (x, z, i) = (cp.a, cp.z, cp.index);
    let chain = a.bimodule_radical_chain(x, z);
    if chain[i].len() != 2 {
        return fail(cp, sd, "the critical radical layer does not have dimension 2");
    }
    if chain.get(i + 1).map(|s| !s.is_empty()).unwrap_or(false) {
        return fail(cp, sd, "the radical power after the critical index is not zero");
    }
    if sd != 2 {
        return fail(cp, sd, "the socle does not have dimension 2");
    }
    if socle.iter().any(|s| s.source != x || s.target != z) {
        return fail(cp, sd, "the socle is not contained in the critical bimodule");
    }
    let f = a.field;
    let ok = |verdict| TrichotomyReport { verdict, critical_pair: Some(cp), socle_dim: sd };
    if x == z {
        if i != 1 {
            return fail(cp, sd, "a critical pair at a single point must have index 1");
        }
        let rad = radical_part(a, x, x);
        if a.pair_dim(x, x) != 3 {
            return fail(cp, sd, "the corner algebra at the critical point does not have dimension 3");
        }
        let square_zero = rad.iter().all(|&p| rad.iter().all(|&q| a.mul_vec(&unit(f, p), &unit(f, q)).is_empty()));
        if !square_zero {
            return fail(cp, sd, "the corner algebra at the critical point has nonzero radical square");
        }
        if !is_node(a, x) {
            return fail(cp, sd, "the critical point is not a node");
        }
        return ok(Verdict::Type1);
    }
    if a.pair_dim(z, x) != 0 {
        return fail(cp, sd, "there are nonzero paths from the end point back to the start point");
    }
    match i {
        0 => {
            if !a.quiver.is_source(x) {
                return fail(cp, sd, "the start point of the critical pair is not a source");
            }
            if !a.quiver.is_sink(z) {
                return fail(cp, sd, "the end point of the critical pair is not a sink");
            }
            if a.pair_dim(x, x) != 1 || a.pair_dim(z, z) != 1 || a.pair_dim(x, z) != 2 {
                return fail(cp, sd, "the corner algebra is not the Kronecker algebra");
            }
            ok(Verdict::Type2)
        }
        1 => {
            if a.pair_dim(x, x) != 2 || a.pair_dim(z, z) != 2 || a.pair_dim(x, z) != 3 {
                return fail(cp, sd, "the corner algebra does not have dimensions (2, 2; 3, 0)");
            }
            let s: SVec = unit(f, radical_part(a, x, x)[0]);
            let r: SVec = unit(f, radical_part(a, z, z)[0]);
            let mut rad1 = Echelon::new(f);
            for v in &chain[1] {
                rad1.insert(v);
            }
            let t: SVec = match a.pair_basis(x, z).iter().map(|&k| unit(f, k)).find(|v| !rad1.contains(v)) {
                Some(t) => t,
                None => return fail(cp, sd, "the critical bimodule has no top"),
            };
            if !a.mul_vec(&s, &s).is_empty() || !a.mul_vec(&r, &r).is_empty() {
                return fail(cp, sd, "a loop generator of the corner algebra does not square to zero");
            }
            let ts = a.mul_vec(&t, &s);
            let rt = a.mul_vec(&r, &t);
            if !a.mul_vec(&r, &ts).is_empty() {
                return fail(cp, sd, "the product r·t·s of the corner generators is not zero");
            }
            if ts.is_empty() || rt.is_empty() {
                return fail(cp, sd, "t·s or r·t vanishes in the corner algebra");
            }
            ok(Verdict::Type3)
        }
        _ => fail(cp, sd, "the critical index exceeds 1"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::quiver::parse_quiver_file;

    fn build(text: &str) -> Algebra {
        Algebra::build(&parse_quiver_file(text).unwrap(), FieldSpec::Rationals).unwrap()
    }

    #[test]
    fn dual_numbers_are_distributive() {
        let a = build("vertex a\narrow r : a -> a\nrelation r.r\n");
        assert!(is_distributive(&a).0);
        assert!(critical_pairs(&a).is_empty());
        assert_eq!(trichotomy(&a).verdict, Verdict::Distributive);
    }

    #[test]
    fn kronecker_is_type_two() {
        let a = build("vertex a z\narrow x : a -> z\narrow y : a -> z\n");
        let (d, ps) = is_distributive(&a);
        assert!(!d);
        let p = ps.iter().find(|p| p.source == 0 && p.target == 1).unwrap();
        assert_eq!(p.dims, vec![2]);
        assert_eq!(critical_pairs(&a), vec![CriticalPair { a: 0, z: 1, index: 0 }]);
        assert_eq!(trichotomy(&a).verdict, Verdict::Type2);
        let lp = long_paths(&a, 100).unwrap();
        assert_eq!(lp.len(), 2);
        assert!(thick_points(&a).is_empty());
        assert!(is_node(&a, 1));
    }

    #[test]
    fn three_arrow_kronecker_fails_socle_condition() {
        let a = build("vertex a z\narrow x : a -> z\narrow y : a -> z\narrow w : a -> z\n");
        let r = trichotomy(&a);
        assert_eq!(r.socle_dim, 3);
        assert!(matches!(r.verdict, Verdict::NotMinimalNonDistributive { .. }));
    }
}
