use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::geometry::qubit::Mat2;
use crate::geometry::{distance_d, UnitaryMatrix};

use super::EpsilonNet;

/// Index of the net point closest to a target, and its distance `D`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Nearest {
    pub index: usize,
    pub distance: f64,
}

impl Nearest {
    fn better_than(&self, o: &Nearest) -> bool {
        self.distance < o.distance || (self.distance == o.distance && self.index < o.index)
    }
}

const CHUNK: usize = 4096;

/// Exhaustive scan for the point minimizing `D(target, point)`. Ties go to
/// the smallest word.
pub fn nearest_point(net: &EpsilonNet, target: &UnitaryMatrix) -> Result<Nearest> {
    nearest_point_with(net, target, Execution::default())
}

pub fn nearest_point_with(
    net: &EpsilonNet,
    target: &UnitaryMatrix,
    exec: Execution,
) -> Result<Nearest> {
    check(net, target)?;
    let n = net.len();
    let chunks = n.div_ceil(CHUNK);
    let best = if let Some(q) = net.qubit_matrices() {
        let t = Mat2::from_unitary(target).adjoint();
        map_indexed(exec, chunks, |c| {
            scan(c * CHUNK..n.min((c + 1) * CHUNK), |i| {
                t.mul(&q[i]).distance_from_identity()
            })
        })
    } else {
        let points = net.points();
        map_indexed(exec, chunks, |c| {
            scan(c * CHUNK..n.min((c + 1) * CHUNK), |i| {
                distance_d(target, &points[i].matrix).unwrap_or(f64::INFINITY)
            })
        })
    };
    Ok(best
        .into_iter()
        .reduce(|a, b| if b.better_than(&a) { b } else { a })
        .expect("net is nonempty"))
}

fn scan(range: std::ops::Range<usize>, dist: impl Fn(usize) -> f64) -> Nearest {
    let mut best = Nearest {
        index: usize::MAX,
        distance: f64::INFINITY,
    };
    for i in range {
        let cand = Nearest {
            index: i,
            distance: dist(i),
        };
        if cand.better_than(&best) {
            best = cand;
        }
    }
    best
}

fn check(net: &EpsilonNet, target: &UnitaryMatrix) -> Result<()> {
    if net.is_empty() {
        return Err(Error::EmptyNet(format!(
            "level-{} net has no points",
            net.level()
        )));
    }
    if target.dim() != net.dim() {
        return Err(Error::DimensionMismatch {
            expected: net.dim(),
            found: target.dim(),
        });
    }
    Ok(())
}

/// Pruning slack absorbing rounding in the triangle inequality.
const SLACK: f64 = 1e-12;

#[derive(Clone, Debug)]
struct Node {
    point: usize,
    mu: f64,
    inside: Option<usize>,
    outside: Option<usize>,
}

/// Vantage-point tree over a qubit net in the metric `D`, which is the
/// bi-invariant distance on `PU(2)`. Returns exactly the point the
/// exhaustive scan returns.
#[derive(Clone, Debug)]
pub struct NetIndex {
    nodes: Vec<Node>,
    root: Option<usize>,
    len: usize,
}

impl NetIndex {
    pub fn build(net: &EpsilonNet) -> Result<NetIndex> {
        let q = net
            .qubit_matrices()
            .ok_or(Error::UnsupportedDimension(net.dim()))?;
        let mut nodes = Vec::with_capacity(net.len());
        let mut items: Vec<usize> = (0..net.len()).collect();
        let root = build_node(q, &mut items, &mut nodes);
        Ok(NetIndex {
            nodes,
            root,
            len: net.len(),
        })
    }

    pub fn nearest(&self, net: &EpsilonNet, target: &UnitaryMatrix) -> Result<Nearest> {
        check(net, target)?;
        if net.len() != self.len {
            return Err(Error::Domain("index was built for a different net".into()));
        }
        let q = net
            .qubit_matrices()
            .ok_or(Error::UnsupportedDimension(net.dim()))?;
        let t = Mat2::from_unitary(target).adjoint();
        let mut best = Nearest {
            index: usize::MAX,
            distance: f64::INFINITY,
        };
        self.search(self.root, q, &t, &mut best);
        Ok(best)
    }

    fn search(&self, node: Option<usize>, q: &[Mat2], t: &Mat2, best: &mut Nearest) {
        let Some(id) = node else { return };
        let n = &self.nodes[id];
        let d = t.mul(&q[n.point]).distance_from_identity();
        let cand = Nearest {
            index: n.point,
            distance: d,
        };
        if cand.better_than(best) {
            *best = cand;
        }
        let (near, far) = if d <= n.mu {
            (n.inside, n.outside)
        } else {
            (n.outside, n.inside)
        };
        self.search(near, q, t, best);
        let bound = (d - n.mu).abs();
        if bound <= best.distance + SLACK {
            self.search(far, q, t, best);
        }
    }
}

fn build_node(q: &[Mat2], items: &mut [usize], nodes: &mut Vec<Node>) -> Option<usize> {
    let (vp, rest) = items.split_first_mut()?;
    let vp = *vp;
    let id = nodes.len();
    nodes.push(Node {
        point: vp,
        mu: 0.0,
        inside: None,
        outside: None,
    });
    if rest.is_empty() {
        return Some(id);
    }
    let va = q[vp].adjoint();
    let mut keyed: Vec<(f64, usize)> = rest
        .iter()
        .map(|&i| (va.mul(&q[i]).distance_from_identity(), i))
        .collect();
    let k = keyed.len() / 2;
    keyed.select_nth_unstable_by(k, |a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mu = keyed[k].0;
    for (slot, (_, i)) in rest.iter_mut().zip(&keyed) {
        *slot = *i;
    }
    let (inside, outside) = rest.split_at_mut(k + 1);
    let inside = build_node(q, inside, nodes);
    let outside = build_node(q, outside, nodes);
    let node = &mut nodes[id];
    node.mu = mu;
    node.inside = inside;
    node.outside = outside;
    Some(id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gateset::{evaluate_word, standard_diffusive_set};
    use crate::geometry::sample_haar_unitary;
    use crate::nets::{build_sampling_net, select_ball};

    #[test]
    fn member_query_finds_itself() {
        let gs = standard_diffusive_set().unwrap();
        let net = build_sampling_net(&gs, 10).unwrap();
        for k in [0usize, 5, 511, 1023] {
            let target = evaluate_word(&gs, &net.points()[k].word).unwrap();
            let hit = nearest_point(&net, &target).unwrap();
            assert!(hit.distance < 1e-10);
            // Distinct words may evaluate to the same class; the smallest wins.
            assert!(hit.index <= k);
        }
    }

    #[test]
    fn identity_target_gives_smallest_radius() {
        let gs = standard_diffusive_set().unwrap();
        let ball = select_ball(&build_sampling_net(&gs, 12).unwrap(), 0.6).unwrap();
        let hit = nearest_point(&ball, &UnitaryMatrix::identity(2)).unwrap();
        let min = ball
            .points()
            .iter()
            .map(|p| p.radius)
            .fold(f64::INFINITY, f64::min);
        assert!((hit.distance - min).abs() < 1e-12);
    }

    #[test]
    fn index_matches_exhaustive_scan() {
        let gs = standard_diffusive_set().unwrap();
        let net = build_sampling_net(&gs, 12).unwrap();
        let index = NetIndex::build(&net).unwrap();
        for seed in 0..100 {
            let target = sample_haar_unitary(2, seed).unwrap();
            let brute = nearest_point(&net, &target).unwrap();
            assert_eq!(index.nearest(&net, &target).unwrap(), brute);
            let seq = nearest_point_with(&net, &target, Execution::Sequential).unwrap();
            assert_eq!(seq, brute);
        }
    }

    #[test]
    fn errors() {
        let gs = standard_diffusive_set().unwrap();
        let net = build_sampling_net(&gs, 3).unwrap();
        assert!(matches!(
            nearest_point(&net, &UnitaryMatrix::identity(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
