use std::collections::BTreeMap;

use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{containing_gap, ggaps_build, ghost_point};
use crate::error::{Error, Result};
use crate::gaps::{gap_report, orbit, Cluster, VerificationOutcome};
use crate::iet::{Iet, DEFAULT_PIECE_TOL};

const PARTITION_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ForestNodeKind {
    /// The `index`-th gap in increasing order.
    Gap { index: usize },
    /// `[beta_i, r(i))`.
    RightSlot { i: usize },
    /// `[l(i), beta_i)`.
    LeftSlot { i: usize },
    /// `[beta_i, beta_{i+1})` with no orbit point inside.
    Between { i: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForestNode {
    #[serde(flatten)]
    pub kind: ForestNodeKind,
    pub left: f64,
    pub right: f64,
    pub label: String,
}

impl ForestNode {
    pub fn length(&self) -> f64 {
        self.right - self.left
    }
}

/// The closest orbit point to `beta_i` on one side, `T^exponent 0`, and the
/// slot length `|point - beta_i|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Slot {
    pub i: usize,
    pub point: f64,
    pub exponent: usize,
    pub length: f64,
}

/// Edges run from each gap to the pieces of its preimage; a piece is either
/// a whole gap or a slot next to a discontinuity.
///
/// The first gap is the right slot `R_0` and the last gap the left slot
/// `L_d`; both are kept as gap nodes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapForest {
    pub n: usize,
    pub d: usize,
    /// Gaps first, in increasing order, then the remaining pieces.
    pub nodes: Vec<ForestNode>,
    /// `(parent, child)`; the children of a gap are listed in the order of
    /// their images.
    pub edges: Vec<(usize, usize)>,
    /// `r(0) .. r(d-1)`, where defined.
    pub right_slots: Vec<Slot>,
    /// `l(1) .. l(d)`, where defined.
    pub left_slots: Vec<Slot>,
    pub ghost: f64,
    /// Exponents of the sorted orbit points.
    pub sigma: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mark {
    Orbit(usize),
    Beta(usize),
}

/// Builds the forest of the orbit segment `T^0 0 .. T^{N-1} 0`.
///
/// Coinciding orbit points, an orbit point on a discontinuity, or a cycle
/// among the gaps are reported as consistency errors.
pub fn fgaps_build(t: &Iet, n: usize) -> Result<GapForest> {
    if n < 2 {
        return Err(Error::domain("the gap forest needs N >= 2"));
    }
    let tol = DEFAULT_PIECE_TOL;
    let d = t.d();
    let beta = t.beta();
    let pts = orbit(t, n);
    let mut sigma: Vec<usize> = (0..n).collect();
    sigma.sort_by(|&a, &b| pts[a].total_cmp(&pts[b]));
    let sorted: Vec<f64> = sigma.iter().map(|&k| pts[k]).collect();
    for w in sigma.windows(2) {
        if pts[w[1]] - pts[w[0]] <= tol {
            return Err(Error::consistency(format!(
                "orbit points T^{}0 and T^{}0 coincide",
                w[0], w[1]
            )));
        }
    }
    if 1.0 - sorted[n - 1] <= tol {
        return Err(Error::consistency(format!(
            "orbit point T^{}0 coincides with 1",
            sigma[n - 1]
        )));
    }

    let mut marks: Vec<(f64, Mark)> = sigma[1..]
        .iter()
        .map(|&k| (pts[k], Mark::Orbit(k)))
        .collect();
    for (i, &b) in beta.iter().enumerate() {
        if (1..d).contains(&i) {
            let k = containing_gap(&sorted, b);
            let near = (b - sorted[k]).min(if k + 1 < n {
                sorted[k + 1] - b
            } else {
                f64::INFINITY
            });
            if near <= tol {
                return Err(Error::consistency(format!(
                    "an orbit point meets the discontinuity beta_{i}"
                )));
            }
        }
        marks.push((b, Mark::Beta(i)));
    }
    marks.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut nodes: Vec<ForestNode> = (0..n)
        .map(|k| ForestNode {
            kind: ForestNodeKind::Gap { index: k },
            left: sorted[k],
            right: if k + 1 < n { sorted[k + 1] } else { 1.0 },
            label: String::new(),
        })
        .collect();
    // (parent, child, image position)
    let mut links: Vec<(usize, usize, f64)> = Vec::new();
    for w in marks.windows(2) {
        let ((a, ma), (b, mb)) = (w[0], w[1]);
        let left_is_gap_end = matches!(ma, Mark::Orbit(_) | Mark::Beta(0));
        let right_is_gap_end = matches!(mb, Mark::Orbit(_)) || mb == Mark::Beta(d);
        let child = if left_is_gap_end && right_is_gap_end {
            containing_gap(&sorted, 0.5 * (a + b))
        } else {
            let (kind, label) = match (ma, mb) {
                (Mark::Beta(i), Mark::Orbit(_)) => {
                    (ForestNodeKind::RightSlot { i }, format!("R{i}"))
                }
                (Mark::Orbit(_), Mark::Beta(i)) => {
                    (ForestNodeKind::LeftSlot { i }, format!("L{i}"))
                }
                (Mark::Beta(i), _) => (ForestNodeKind::Between { i }, format!("B{i}")),
                _ => unreachable!("two orbit points bound a gap"),
            };
            nodes.push(ForestNode {
                kind,
                left: a,
                right: b,
                label,
            });
            nodes.len() - 1
        };
        let image = t.map(0.5 * (a + b));
        links.push((containing_gap(&sorted, image), child, image));
    }
    links.sort_by(|x, y| x.0.cmp(&y.0).then(x.2.total_cmp(&y.2)));
    let edges: Vec<(usize, usize)> = links.iter().map(|&(p, c, _)| (p, c)).collect();

    let mut g: DiGraph<(), ()> = DiGraph::new();
    let ids: Vec<_> = nodes.iter().map(|_| g.add_node(())).collect();
    for &(p, c) in &edges {
        g.add_edge(ids[p], ids[c], ());
    }
    let order = petgraph::algo::toposort(&g, None).map_err(|c| {
        Error::consistency(format!(
            "the gap forest has a cycle through node {}",
            c.node_id().index()
        ))
    })?;

    let mut children: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for &(p, c) in &edges {
        children[p].push(c);
    }
    for k in 0..n {
        let sum: f64 = children[k].iter().map(|&c| nodes[c].length()).sum();
        if (sum - nodes[k].length()).abs() > PARTITION_TOL {
            return Err(Error::consistency(format!(
                "preimage pieces of gap {k} have total length {sum}, gap has {}",
                nodes[k].length()
            )));
        }
    }

    nodes[0].label = "R0".into();
    nodes[n - 1].label = format!("L{d}");
    for &v in order.iter().rev() {
        let k = v.index();
        if k == 0 || k == n - 1 || k >= n {
            continue;
        }
        let parts: Vec<&str> = children[k]
            .iter()
            .map(|&c| nodes[c].label.as_str())
            .collect();
        nodes[k].label = parts.join("+");
    }

    let slot = |i: usize, k: usize| Slot {
        i,
        point: sorted[k],
        exponent: sigma[k],
        length: (sorted[k] - beta[i]).abs(),
    };
    let right_slots = (0..d)
        .filter_map(|i| {
            let k = sorted.partition_point(|&x| x <= beta[i]);
            (k < n).then(|| slot(i, k))
        })
        .collect();
    let left_slots = (1..=d)
        .filter_map(|i| {
            let k = sorted.partition_point(|&x| x < beta[i]);
            (k >= 2).then(|| slot(i, k - 1))
        })
        .collect();

    Ok(GapForest {
        n,
        d,
        nodes,
        edges,
        right_slots,
        left_slots,
        ghost: ghost_point(t, n),
        sigma,
    })
}

/// How a gap obtains its length in the forest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapRole {
    First,
    Last,
    /// Preimage has several pieces.
    Splitting,
    /// Preimage is a single slot.
    Terminal,
    /// Preimage is a single gap of the same length.
    Chain,
}

/// A distinct gap length, named after the gap that contributes it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForestLength {
    pub label: String,
    pub value: f64,
    pub count: usize,
    pub role: GapRole,
}

impl GapForest {
    pub fn num_gaps(&self) -> usize {
        self.n
    }

    pub fn children(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter(move |e| e.0 == v).map(|e| e.1)
    }

    pub fn role(&self, gap: usize) -> GapRole {
        if gap == 0 {
            return GapRole::First;
        }
        if gap == self.n - 1 {
            return GapRole::Last;
        }
        let kids: Vec<usize> = self.children(gap).collect();
        match kids.as_slice() {
            [c] if *c < self.n => GapRole::Chain,
            [_] => GapRole::Terminal,
            _ => GapRole::Splitting,
        }
    }

    /// Gap lengths rebuilt from the slots: `R_0` and `L_d` for the first and
    /// last gaps, sums over the pieces for the others.
    pub fn derived_lengths(&self) -> Vec<f64> {
        let mut value: Vec<Option<f64>> = vec![None; self.nodes.len()];
        for (k, node) in self.nodes.iter().enumerate() {
            if k >= self.n {
                value[k] = Some(node.length());
            }
        }
        value[0] = Some(
            self.right_slots
                .first()
                .map_or(self.nodes[0].length(), |s| s.length),
        );
        let last = self.left_slots.last().filter(|s| s.i == self.d);
        value[self.n - 1] = Some(last.map_or(self.nodes[self.n - 1].length(), |s| s.length));
        fn eval(f: &GapForest, v: usize, value: &mut Vec<Option<f64>>) -> f64 {
            if let Some(x) = value[v] {
                return x;
            }
            let kids: Vec<usize> = f.children(v).collect();
            let x = kids.into_iter().map(|c| eval(f, c, value)).sum();
            value[v] = Some(x);
            x
        }
        (0..self.n).map(|k| eval(self, k, &mut value)).collect()
    }

    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        for (k, v) in self.nodes.iter().enumerate() {
            s.push_str(&format!(
                "v {k} {} {} {} {}\n",
                v.left,
                v.right,
                v.length(),
                v.label
            ));
        }
        for &(p, c) in &self.edges {
            s.push_str(&format!("e {p} {c} {}\n", self.nodes[c].length()));
        }
        s
    }

    /// Glues each slot pair `L_i`, `R_i` (and any piece between them) into
    /// the gap around `beta_i`: the edges `(source, target, weight)` of the
    /// resulting gap graph.
    pub fn glue(&self) -> Vec<(usize, usize, f64)> {
        let mut w: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for &(p, c) in &self.edges {
            let node = &self.nodes[c];
            let target = if c < self.n {
                c
            } else {
                let mid = 0.5 * (node.left + node.right);
                self.nodes[..self.n].partition_point(|g| g.left <= mid) - 1
            };
            *w.entry((p, target)).or_default() += node.length();
        }
        w.into_iter().map(|((a, b), x)| (a, b, x)).collect()
    }
}

/// The distinct gap lengths read off the forest, each named by its
/// preferred contributor: the first gap, then the last gap, then the
/// splitting and terminal gaps in increasing position.
pub fn gap_lengths_from_forest(forest: &GapForest, eps: f64) -> Vec<ForestLength> {
    let values = forest.derived_lengths();
    let mut idx: Vec<usize> = (0..forest.n).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for k in idx {
        match groups.last_mut() {
            Some(g) if values[k] - last < eps => g.push(k),
            _ => groups.push(vec![k]),
        }
        last = values[k];
    }
    groups
        .into_iter()
        .map(|g| {
            let best = *g
                .iter()
                .min_by_key(|&&k| (forest.role(k), k))
                .expect("groups are nonempty");
            ForestLength {
                label: forest.nodes[best].label.clone(),
                value: g.iter().map(|&k| values[k]).sum::<f64>() / g.len() as f64,
                count: g.len(),
                role: forest.role(best),
            }
        })
        .collect()
}

/// Compares the forest-derived lengths with the clusters of the gap report.
pub fn verify_forest(t: &Iet, n: usize, eps: f64) -> Result<VerificationOutcome> {
    let forest = fgaps_build(t, n)?;
    let lengths = gap_lengths_from_forest(&forest, eps);
    let rep = gap_report(t, n, eps, false)?;
    let ok = lengths.len() == rep.clusters.len()
        && lengths
            .iter()
            .zip(&rep.clusters)
            .all(|(l, c)| (l.value - c.length).abs() <= eps && l.count == c.count);
    let clusters: Vec<Cluster> = lengths
        .iter()
        .map(|l| Cluster {
            length: l.value,
            count: l.count,
        })
        .collect();
    Ok(VerificationOutcome::new(
        "forest",
        ok,
        json!({"clusters": rep.clusters}),
        json!({"clusters": clusters, "lengths": lengths}),
        if ok {
            String::new()
        } else {
            "forest lengths disagree with the gap report".to_string()
        },
    ))
}

/// Checks that gluing the slots of the forest gives the gap graph, edge by
/// edge and up to isomorphism.
pub fn verify_glue(t: &Iet, n: usize) -> Result<VerificationOutcome> {
    let forest = fgaps_build(t, n)?;
    let graph = ggaps_build(t, n)?;
    let glued = forest.glue();
    let same_edges = glued.len() == graph.edges.len()
        && glued.iter().zip(&graph.edges).all(|(&(a, b, w), e)| {
            a == e.source && b == e.target && (w - e.weight).abs() <= PARTITION_TOL
        });
    let mut g: DiGraph<(), ()> = DiGraph::new();
    let ids: Vec<_> = (0..forest.n).map(|_| g.add_node(())).collect();
    for &(a, b, _) in &glued {
        g.add_edge(ids[a], ids[b], ());
    }
    let h = graph.to_petgraph().map(|_, _| (), |_, _| ());
    let iso = petgraph::algo::is_isomorphic(&g, &h);
    let ok = same_edges && iso;
    Ok(VerificationOutcome::new(
        "glue",
        ok,
        json!({"edges": graph.edges.len()}),
        json!({"edges": glued.len(), "same_edges": same_edges, "isomorphic": iso}),
        if ok {
            String::new()
        } else {
            "glued forest differs from the gap graph".to_string()
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::root_three_iet;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn find(f: &GapForest, left_exp: Option<usize>, right_exp: Option<usize>) -> usize {
        let pos = |e: usize| f.sigma.iter().position(|&k| k == e).unwrap();
        (0..f.n)
            .find(|&k| {
                left_exp.is_none_or(|e| pos(e) == k)
                    && right_exp.map_or(k == f.n - 1, |e| pos(e) == k + 1)
            })
            .unwrap()
    }

    #[test]
    fn root_three_forest() {
        let t = root_three_iet();
        let f = fgaps_build(&t, 8).unwrap();
        let gap = |a: usize, b: usize| find(&f, Some(a), Some(b));
        let kids = |v: usize| f.children(v).collect::<Vec<_>>();
        // the chain down to the first gap
        assert_eq!(kids(gap(4, 7)), vec![gap(3, 6)]);
        assert_eq!(kids(gap(3, 6)), vec![gap(2, 5)]);
        assert_eq!(kids(gap(2, 5)), vec![gap(1, 4)]);
        assert_eq!(kids(gap(1, 4)), vec![0]);
        // the split
        let split: Vec<String> = kids(gap(6, 1))
            .iter()
            .map(|&c| f.nodes[c].label.clone())
            .collect();
        assert_eq!(split, ["L3", "R1", "L2"]);
        assert_eq!(kids(gap(6, 1))[0], f.n - 1);
        assert_eq!(kids(gap(7, 2)), vec![gap(6, 1)]);
        assert!((f.ghost - 0.414578).abs() < 1e-6);

        let lengths = gap_lengths_from_forest(&f, 1e-10);
        let got: Vec<(&str, f64)> = lengths
            .iter()
            .map(|l| (l.label.as_str(), l.value))
            .collect();
        assert_eq!(got.len(), 3);
        for (label, value) in [("R0", 0.138193), ("L3", 0.016508), ("L3+R1+L2", 0.146265)] {
            assert!(
                got.iter()
                    .any(|&(l, v)| l == label && (v - value).abs() < 1e-5),
                "{label} in {got:?}"
            );
        }
        assert!(verify_forest(&t, 8, 1e-10).unwrap().passed());
        assert!(verify_glue(&t, 8).unwrap().passed());
    }

    #[test]
    fn rotation_forest() {
        let r = Iet::rotation(FRAC_1_SQRT_2).unwrap();
        let f = fgaps_build(&r, 9).unwrap();
        assert_eq!(f.right_slots.len(), 2);
        assert_eq!(f.left_slots.len(), 2);
        assert!(f
            .right_slots
            .iter()
            .chain(&f.left_slots)
            .all(|s| s.length > 0.0));
        let lengths = gap_lengths_from_forest(&f, 1e-10);
        let counts: Vec<usize> = lengths.iter().map(|l| l.count).collect();
        assert_eq!(counts, [2, 6, 1]);
        assert!(verify_forest(&r, 9, 1e-10).unwrap().passed());
        assert!(verify_glue(&r, 9).unwrap().passed());
    }

    #[test]
    fn two_gaps() {
        let f = fgaps_build(&Iet::rotation(0.3).unwrap(), 2).unwrap();
        assert_eq!(f.num_gaps(), 2);
        assert!(verify_forest(&Iet::rotation(0.3).unwrap(), 2, 1e-10)
            .unwrap()
            .passed());
    }

    #[test]
    fn periodic_orbit_is_rejected() {
        let err = fgaps_build(&Iet::rotation(0.25).unwrap(), 6).unwrap_err();
        assert!(matches!(err, Error::Consistency(_)));
        let err = fgaps_build(&Iet::rotation(0.25).unwrap(), 4).unwrap_err();
        assert!(matches!(err, Error::Consistency(_)));
    }
}
