use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{containing_gap, ghost_point, interior};
use crate::error::{Error, Result};
use crate::gaps::{cluster_lengths, default_eps, gap_report, VerificationOutcome};
use crate::iet::{keane_check, Iet, KeaneOutcome, DEFAULT_PIECE_TOL};

const BALANCE_TOL: f64 = 1e-10;

/// A gap `[left, right)` between consecutive orbit points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapVertex {
    pub left: f64,
    pub right: f64,
    pub weight: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapEdge {
    pub source: usize,
    pub target: usize,
    pub weight: f64,
}

/// The Rauzy graph of the gaps: an edge `i -> j` whenever the preimage of
/// gap `i` meets gap `j`, weighted by the measure of the intersection.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapGraph {
    pub n: usize,
    pub d: usize,
    pub vertices: Vec<GapVertex>,
    /// Sorted by `(source, target)`.
    pub edges: Vec<GapEdge>,
    /// `T^N 0`.
    pub ghost: f64,
    /// The `alpha_k`, `0 < k < d`, at which the inverse is discontinuous;
    /// `alpha_k` is skipped when `pi^{-1}(k+1) = pi^{-1}(k) + 1`.
    pub alpha: Vec<f64>,
    /// The `beta_i`, `0 < i < d`, at which the map is discontinuous.
    pub beta: Vec<f64>,
}

/// Builds the graph with pieces shorter than `2^-45` dropped.
pub fn ggaps_build(t: &Iet, n: usize) -> Result<GapGraph> {
    ggaps_build_tol(t, n, DEFAULT_PIECE_TOL)
}

pub fn ggaps_build_tol(t: &Iet, n: usize, tol: f64) -> Result<GapGraph> {
    if n < 2 {
        return Err(Error::domain("the gap graph needs N >= 2"));
    }
    let points = gap_report(t, n, default_eps(n), false)?.points;
    let mut bounds = points.clone();
    bounds.push(1.0);
    let vertices: Vec<GapVertex> = bounds
        .windows(2)
        .map(|w| GapVertex {
            left: w[0],
            right: w[1],
            weight: w[1] - w[0],
        })
        .collect();

    let d = t.d();
    let (alpha, beta, pi) = (t.alpha(), t.beta(), t.pi());
    let mut weights: std::collections::BTreeMap<(usize, usize), f64> = Default::default();
    for (i, v) in vertices.iter().enumerate() {
        let mut cuts = vec![v.left];
        cuts.extend(
            alpha[1..d]
                .iter()
                .copied()
                .filter(|&a| interior(a, v.left, v.right, tol)),
        );
        cuts.push(v.right);
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let j = alpha[1..d].partition_point(|&x| x <= 0.5 * (a + b)) + 1;
            let shift = beta[pi.preimage(j) - 1] - alpha[j - 1];
            let (lo, hi) = (a + shift, b + shift);
            let first = containing_gap(&points, lo.max(0.0));
            for (k, g) in vertices.iter().enumerate().skip(first) {
                if g.left >= hi {
                    break;
                }
                let m = hi.min(g.right) - lo.max(g.left);
                if m > tol {
                    *weights.entry((i, k)).or_default() += m;
                }
            }
        }
    }
    let edges: Vec<GapEdge> = weights
        .into_iter()
        .map(|((source, target), weight)| GapEdge {
            source,
            target,
            weight,
        })
        .collect();
    let graph = GapGraph {
        n,
        d,
        vertices,
        edges,
        ghost: ghost_point(t, n),
        alpha: (1..d)
            .filter(|&k| pi.preimage(k + 1) != pi.preimage(k) + 1)
            .map(|k| alpha[k])
            .collect(),
        beta: (1..d)
            .filter(|&i| pi.image(i + 1) != pi.image(i) + 1)
            .map(|i| beta[i])
            .collect(),
    };
    graph.check_weights()?;
    Ok(graph)
}

impl GapGraph {
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// `#E - #V`.
    pub fn excess(&self) -> isize {
        self.edges.len() as isize - self.vertices.len() as isize
    }

    pub fn outdeg(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.source == v).count()
    }

    pub fn indeg(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.target == v).count()
    }

    fn degrees(&self) -> (Vec<usize>, Vec<usize>) {
        let mut out = vec![0; self.vertices.len()];
        let mut inn = vec![0; self.vertices.len()];
        for e in &self.edges {
            out[e.source] += 1;
            inn[e.target] += 1;
        }
        (inn, out)
    }

    /// Total weight is 1 and every vertex carries the same weight in and out.
    fn check_weights(&self) -> Result<()> {
        let total: f64 = self.vertices.iter().map(|v| v.weight).sum();
        if (total - 1.0).abs() > BALANCE_TOL {
            return Err(Error::consistency(format!("vertex weights sum to {total}")));
        }
        let mut inw = vec![0.0; self.vertices.len()];
        let mut outw = vec![0.0; self.vertices.len()];
        for e in &self.edges {
            outw[e.source] += e.weight;
            inw[e.target] += e.weight;
        }
        for (k, v) in self.vertices.iter().enumerate() {
            if (inw[k] - v.weight).abs() > BALANCE_TOL || (outw[k] - v.weight).abs() > BALANCE_TOL {
                return Err(Error::consistency(format!(
                    "vertex {k}: weight {} but in {} and out {}",
                    v.weight, inw[k], outw[k]
                )));
            }
        }
        Ok(())
    }

    /// No gap holds two discontinuities of the map, nor two of its inverse.
    /// Otherwise two preimage pieces of one gap may land in the same gap.
    pub fn separated(&self) -> bool {
        let tol = DEFAULT_PIECE_TOL;
        self.vertices.iter().all(|v| {
            let count = |xs: &[f64]| {
                xs.iter()
                    .filter(|&&x| interior(x, v.left, v.right, tol))
                    .count()
            };
            count(&self.alpha) <= 1 && count(&self.beta) <= 1
        })
    }

    pub fn to_petgraph(&self) -> DiGraph<usize, f64> {
        let mut g = DiGraph::with_capacity(self.vertices.len(), self.edges.len());
        let ids: Vec<_> = (0..self.vertices.len()).map(|k| g.add_node(k)).collect();
        for e in &self.edges {
            g.add_edge(ids[e.source], ids[e.target], e.weight);
        }
        g
    }

    /// Cycles all of whose vertices have `indeg = outdeg = 1`, i.e. cycles
    /// that form a whole component of the graph.
    pub fn distinct_cycles(&self) -> Vec<Vec<usize>> {
        let (inn, out) = self.degrees();
        let mut g: DiGraph<usize, ()> = DiGraph::new();
        let keep: Vec<usize> = (0..self.vertices.len())
            .filter(|&v| inn[v] == 1 && out[v] == 1)
            .collect();
        let mut id = vec![None; self.vertices.len()];
        for &v in &keep {
            id[v] = Some(g.add_node(v));
        }
        let mut self_loop = vec![false; self.vertices.len()];
        for e in &self.edges {
            if let (Some(a), Some(b)) = (id[e.source], id[e.target]) {
                g.add_edge(a, b, ());
                if e.source == e.target {
                    self_loop[e.source] = true;
                }
            }
        }
        let mut out: Vec<Vec<usize>> = petgraph::algo::tarjan_scc(&g)
            .into_iter()
            .map(|c| c.into_iter().map(|n| g[n]).collect::<Vec<_>>())
            .filter(|c| c.len() > 1 || self_loop[c[0]])
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        out.sort();
        out
    }

    /// One line per vertex (`v id left right weight`) followed by one line
    /// per edge (`e source target weight`).
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        for (k, v) in self.vertices.iter().enumerate() {
            s.push_str(&format!("v {k} {} {} {}\n", v.left, v.right, v.weight));
        }
        for e in &self.edges {
            s.push_str(&format!("e {} {} {}\n", e.source, e.target, e.weight));
        }
        s
    }
}

/// Checks `outdeg(v) = 1 + [T^N 0 in v] + #{alpha_k in v}` for every gap
/// and `#E - #V <= d - 1`.
///
/// The identity needs the discontinuities to be separated by the orbit;
/// a mismatch on a graph that is not [`GapGraph::separated`] is reported as
/// not applicable, while the excess bound is still enforced.
pub fn outdegree_identity_check(t: &Iet, n: usize) -> Result<VerificationOutcome> {
    if t.is_identity() {
        return Ok(VerificationOutcome::not_applicable(
            "outdegree",
            "identity map has a single gap",
        ));
    }
    let g = ggaps_build(t, n)?;
    let (_, out) = g.degrees();
    let tol = DEFAULT_PIECE_TOL;
    let mut bad = Vec::new();
    for (k, v) in g.vertices.iter().enumerate() {
        let expected = 1
            + usize::from(interior(g.ghost, v.left, v.right, tol))
            + g.alpha
                .iter()
                .filter(|&&a| interior(a, v.left, v.right, tol))
                .count();
        if out[k] != expected {
            bad.push(json!({"vertex": k, "left": v.left, "right": v.right, "outdeg": out[k], "expected": expected}));
        }
    }
    let excess = g.excess();
    let separated = g.separated();
    if !bad.is_empty() && !separated && excess < g.d as isize {
        return Ok(VerificationOutcome {
            observed: json!({"excess": excess, "violations": bad, "separated": false}),
            ..VerificationOutcome::not_applicable(
                "outdegree",
                "discontinuities are not separated by the orbit",
            )
        });
    }
    let ok = bad.is_empty() && excess < g.d as isize;
    let message = match (bad.first(), ok) {
        (_, true) => String::new(),
        (Some(v), _) => format!("outdegree identity fails at {v}"),
        (None, _) => format!("#E - #V = {excess} exceeds d - 1"),
    };
    Ok(VerificationOutcome::new(
        "outdegree",
        ok,
        json!({"excess_bound": g.d - 1}),
        json!({
            "vertices": g.num_vertices(),
            "edges": g.num_edges(),
            "excess": excess,
            "violations": bad,
            "separated": separated,
        }),
        message,
    ))
}

/// Checks `#{distinct vertex weights} <= 3(#E - #V) <= 3(d - 1)`.
///
/// Not applicable when the graph has a distinct cycle or when minimality is
/// not certified by a bounded Keane check.
pub fn boshernitzan_bound_check(t: &Iet, n: usize) -> Result<VerificationOutcome> {
    let d = t.d();
    if d < 2 {
        return Ok(VerificationOutcome::not_applicable(
            "bosh",
            "identity map is not minimal",
        ));
    }
    let keane = keane_check(t, n.max(1000), 1e-10 / d as f64);
    if let KeaneOutcome::Violated { .. } = keane {
        return Ok(VerificationOutcome {
            observed: json!({"keane": keane}),
            ..VerificationOutcome::not_applicable(
                "bosh",
                "Keane condition fails; minimality not certified",
            )
        });
    }
    let g = ggaps_build(t, n)?;
    let cycles = g.distinct_cycles();
    if !cycles.is_empty() {
        return Ok(VerificationOutcome {
            observed: json!({"distinct_cycles": cycles}),
            ..VerificationOutcome::not_applicable("bosh", "graph has distinct cycles")
        });
    }
    let weights: Vec<f64> = g.vertices.iter().map(|v| v.weight).collect();
    let count = cluster_lengths(&weights, default_eps(n)).len();
    let bound = 3 * g.excess().max(0) as usize;
    let graph_bound = 3 * (d - 1);
    let ok = count <= bound && bound <= graph_bound;
    let mut observed = json!({
        "distinct_weights": count,
        "vertices": g.num_vertices(),
        "edges": g.num_edges(),
    });
    if !ok {
        observed["graph"] =
            serde_json::to_value(&g).map_err(|e| Error::consistency(e.to_string()))?;
    }
    Ok(VerificationOutcome::new(
        "bosh",
        ok,
        json!({"bound": bound, "graph_bound": graph_bound}),
        observed,
        if ok {
            String::new()
        } else {
            format!("{count} distinct weights exceed 3(#E - #V) = {bound}")
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::root_three_iet;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn rotation_graph() {
        let g = ggaps_build(&Iet::rotation(FRAC_1_SQRT_2).unwrap(), 9).unwrap();
        assert_eq!(g.num_vertices(), 9);
        assert!(g.excess() <= 1);
        assert!(
            outdegree_identity_check(&Iet::rotation(FRAC_1_SQRT_2).unwrap(), 9)
                .unwrap()
                .passed()
        );
    }

    #[test]
    fn two_points() {
        let g = ggaps_build(&Iet::rotation(0.3).unwrap(), 2).unwrap();
        assert_eq!(g.num_vertices(), 2);
        let total: f64 = g.edges.iter().map(|e| e.weight).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn root_three_graph() {
        let t = root_three_iet();
        let g = ggaps_build(&t, 8).unwrap();
        assert!(g.excess() <= 2);
        assert!(outdegree_identity_check(&t, 8).unwrap().passed());
        let out = boshernitzan_bound_check(&t, 8).unwrap();
        assert!(out.passed(), "{out:?}");
        assert_eq!(out.observed["distinct_weights"], 3);
        assert_eq!(out.expected["graph_bound"], 6);
    }

    #[test]
    fn rotations_meet_three() {
        for (theta, n) in [
            (FRAC_1_SQRT_2, 9),
            (0.618_033_988_749_894_9, 50),
            (0.1234567, 300),
        ] {
            let out = boshernitzan_bound_check(&Iet::rotation(theta).unwrap(), n).unwrap();
            assert!(out.passed(), "{theta} {n}: {out:?}");
            assert_eq!(out.expected["graph_bound"], 3);
        }
    }

    #[test]
    fn periodic_rotation_has_cycles() {
        let g = ggaps_build(&Iet::rotation(0.25).unwrap(), 10).unwrap();
        assert_eq!(g.num_vertices(), 4);
        assert!(!g.distinct_cycles().is_empty());
    }

    #[test]
    fn identity_is_skipped() {
        let out = outdegree_identity_check(&Iet::identity(), 5).unwrap();
        assert_eq!(out.status, crate::gaps::VerificationStatus::NotApplicable);
    }

    #[test]
    fn edge_list_lines() {
        let g = ggaps_build(&Iet::rotation(0.3).unwrap(), 3).unwrap();
        let text = g.to_edge_list();
        assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 3);
        assert_eq!(
            text.lines().filter(|l| l.starts_with("e ")).count(),
            g.num_edges()
        );
    }
}
