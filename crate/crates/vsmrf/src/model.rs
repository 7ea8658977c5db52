//! Pairwise VS-MRF parameterization: the joint model, node-conditional
//! natural parameters, and the per-node flat parameter layout used by the
//! solver.
//!
//! The joint density over the node vector is, up to normalization,
//!
//! ```text
//! log P(x) = sum_r <B_r(x_r), theta_r> + sum_{r<t} B_r(x_r)' Theta_rt B_t(x_t)
//! ```
//!
//! with one weight matrix per unordered pair, stored once; the `(t, r)` view
//! is the transpose. Node `r`'s conditional distribution is its exponential
//! family evaluated at the affine natural parameter
//! `theta_r + sum_{t != r} Theta_rt B_t(x_t)`.

use crate::error::{Error, Result};
use crate::expfam::Family;
use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Ordered list of named nodes with their families.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSchema {
    nodes: Vec<(String, Family)>,
    stat_offsets: Vec<usize>,
    raw_offsets: Vec<usize>,
}

impl GraphSchema {
    pub fn new(nodes: Vec<(String, Family)>) -> Result<GraphSchema> {
        if nodes.is_empty() {
            return Err(Error::InvalidArgument("schema needs at least one node".into()));
        }
        for i in 0..nodes.len() {
            for j in (i + 1)..nodes.len() {
                if nodes[i].0 == nodes[j].0 {
                    return Err(Error::InvalidArgument(format!(
                        "duplicate node name '{}'",
                        nodes[i].0
                    )));
                }
            }
        }
        let mut stat_offsets = Vec::with_capacity(nodes.len() + 1);
        let mut raw_offsets = Vec::with_capacity(nodes.len() + 1);
        let (mut s, mut w) = (0, 0);
        for (_, fam) in &nodes {
            stat_offsets.push(s);
            raw_offsets.push(w);
            s += fam.stat_dim();
            w += fam.raw_dim();
        }
        stat_offsets.push(s);
        raw_offsets.push(w);
        Ok(GraphSchema {
            nodes,
            stat_offsets,
            raw_offsets,
        })
    }

    pub fn p(&self) -> usize {
        self.nodes.len()
    }

    pub fn name(&self, r: usize) -> &str {
        &self.nodes[r].0
    }

    pub fn family(&self, r: usize) -> &Family {
        &self.nodes[r].1
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&str, &Family)> {
        self.nodes.iter().map(|(n, f)| (n.as_str(), f))
    }

    pub fn stat_dim(&self, r: usize) -> usize {
        self.nodes[r].1.stat_dim()
    }

    pub fn raw_dim(&self, r: usize) -> usize {
        self.nodes[r].1.raw_dim()
    }

    pub fn stat_offset(&self, r: usize) -> usize {
        self.stat_offsets[r]
    }

    pub fn raw_offset(&self, r: usize) -> usize {
        self.raw_offsets[r]
    }

    pub fn total_stat_dim(&self) -> usize {
        *self.stat_offsets.last().unwrap()
    }

    pub fn total_raw_dim(&self) -> usize {
        *self.raw_offsets.last().unwrap()
    }

    /// Flat parameter length for node `r`: `m_r * (1 + sum_{t != r} m_t)`.
    pub fn flat_len(&self, r: usize) -> usize {
        let m_r = self.stat_dim(r);
        let others: usize = (0..self.p()).filter(|&t| t != r).map(|t| self.stat_dim(t)).sum();
        m_r * (1 + others)
    }

    pub fn is_fully_discrete(&self) -> bool {
        self.nodes.iter().all(|(_, f)| f.is_discrete())
    }

    /// Raw coordinates of node `r` within a full sample row.
    pub fn raw_slice<'a>(&self, row: &'a [f64], r: usize) -> &'a [f64] {
        &row[self.raw_offsets[r]..self.raw_offsets[r] + self.raw_dim(r)]
    }
}

/// Joint pairwise model: per-node bias vectors plus symmetric edge blocks.
///
/// Edge blocks are stored once under the ordered key `(min, max)`; absent
/// pairs are zero matrices. The model is immutable for all read paths and
/// safe to share across workers.
#[derive(Debug, Clone, PartialEq)]
pub struct JointModel {
    schema: GraphSchema,
    bias: Vec<Array1<f64>>,
    edges: BTreeMap<(usize, usize), Array2<f64>>,
}

impl JointModel {
    /// Edge-free model with the given bias vectors.
    pub fn new(schema: GraphSchema, bias: Vec<Array1<f64>>) -> Result<JointModel> {
        if bias.len() != schema.p() {
            return Err(Error::ShapeMismatch(format!(
                "expected {} bias vectors, got {}",
                schema.p(),
                bias.len()
            )));
        }
        for (r, b) in bias.iter().enumerate() {
            if b.len() != schema.stat_dim(r) {
                return Err(Error::ShapeMismatch(format!(
                    "bias for node {r} has length {}, family needs {}",
                    b.len(),
                    schema.stat_dim(r)
                )));
            }
        }
        Ok(JointModel {
            schema,
            bias,
            edges: BTreeMap::new(),
        })
    }

    pub fn schema(&self) -> &GraphSchema {
        &self.schema
    }

    pub fn bias(&self, r: usize) -> &Array1<f64> {
        &self.bias[r]
    }

    /// Stores the block for `{r, t}` oriented as `m_r x m_t`. A zero block
    /// clears the edge.
    pub fn set_edge(&mut self, r: usize, t: usize, block: Array2<f64>) -> Result<()> {
        if r == t || r >= self.schema.p() || t >= self.schema.p() {
            return Err(Error::InvalidArgument(format!("bad edge ({r}, {t})")));
        }
        let (m_r, m_t) = (self.schema.stat_dim(r), self.schema.stat_dim(t));
        if block.dim() != (m_r, m_t) {
            return Err(Error::ShapeMismatch(format!(
                "edge ({r}, {t}) block is {:?}, expected ({m_r}, {m_t})",
                block.dim()
            )));
        }
        let (key, oriented) = if r < t {
            ((r, t), block)
        } else {
            ((t, r), block.t().to_owned())
        };
        if oriented.iter().all(|&v| v == 0.0) {
            self.edges.remove(&key);
        } else {
            self.edges.insert(key, oriented);
        }
        Ok(())
    }

    /// The `(r, t)`-oriented block, or `None` when the pair is not an edge.
    pub fn edge(&self, r: usize, t: usize) -> Option<Array2<f64>> {
        let key = (r.min(t), r.max(t));
        self.edges.get(&key).map(|b| {
            if r < t {
                b.clone()
            } else {
                b.t().to_owned()
            }
        })
    }

    pub fn has_edge(&self, r: usize, t: usize) -> bool {
        self.edges.contains_key(&(r.min(t), r.max(t)))
    }

    /// Iterates stored edges in canonical `(r < t)` order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &Array2<f64>)> {
        self.edges.iter().map(|(&(r, t), b)| (r, t, b))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Node `r`'s conditional natural parameter given the other nodes'
    /// sufficient statistics.
    pub fn conditional_from_stats(&self, r: usize, stats: &[Array1<f64>]) -> Array1<f64> {
        let mut eta = self.bias[r].clone();
        for t in 0..self.schema.p() {
            if t == r {
                continue;
            }
            let key = (r.min(t), r.max(t));
            if let Some(block) = self.edges.get(&key) {
                if r < t {
                    eta = eta + block.dot(&stats[t]);
                } else {
                    eta = eta + block.t().dot(&stats[t]);
                }
            }
        }
        eta
    }

    /// Conditional natural parameter from a full raw sample row; node `r`'s
    /// own coordinates are ignored.
    pub fn conditional_natural_params(&self, r: usize, row: &[f64]) -> Result<Array1<f64>> {
        let mut eta = self.bias[r].clone();
        for t in 0..self.schema.p() {
            if t == r {
                continue;
            }
            let key = (r.min(t), r.max(t));
            if let Some(block) = self.edges.get(&key) {
                let b_t = self
                    .schema
                    .family(t)
                    .sufficient_statistics(self.schema.raw_slice(row, t))?;
                if r < t {
                    eta = eta + block.dot(&b_t);
                } else {
                    eta = eta + block.t().dot(&b_t);
                }
            }
        }
        self.schema.family(r).check_params(eta.as_slice().unwrap())?;
        Ok(eta)
    }

    /// Sum over nodes of the conditional log density: the log pseudo-likelihood
    /// of one sample.
    pub fn node_log_pseudolikelihood(&self, row: &[f64]) -> Result<f64> {
        let stats: Vec<Array1<f64>> = (0..self.schema.p())
            .map(|t| {
                self.schema
                    .family(t)
                    .sufficient_statistics(self.schema.raw_slice(row, t))
            })
            .collect::<Result<_>>()?;
        let mut total = 0.0;
        for r in 0..self.schema.p() {
            let eta = self.conditional_from_stats(r, &stats);
            let fam = self.schema.family(r);
            fam.check_params(eta.as_slice().unwrap())
                .map_err(|e| Error::InfeasibleConditional {
                    sample: None,
                    reason: format!("node {r}: {e}"),
                })?;
            let a = fam.log_partition(eta.as_slice().unwrap())?;
            total += stats[r].dot(&eta) - a;
        }
        Ok(total)
    }

    /// Unnormalized joint log density of one sample: bias terms plus one
    /// interaction term per stored edge.
    pub fn log_potential(&self, row: &[f64]) -> Result<f64> {
        let stats: Vec<Array1<f64>> = (0..self.schema.p())
            .map(|t| {
                self.schema
                    .family(t)
                    .sufficient_statistics(self.schema.raw_slice(row, t))
            })
            .collect::<Result<_>>()?;
        let mut total = 0.0;
        for r in 0..self.schema.p() {
            total += stats[r].dot(&self.bias[r]);
        }
        for (&(r, t), block) in &self.edges {
            total += stats[r].dot(&block.dot(&stats[t]));
        }
        Ok(total)
    }

    /// All raw configurations of a fully discrete model, in lexicographic
    /// order. Intended for small enumerable models in tests and diagnostics.
    pub fn enumerate_configurations(&self) -> Result<Vec<Vec<f64>>> {
        if !self.schema.is_fully_discrete() {
            return Err(Error::InvalidArgument(
                "enumeration requires all-discrete families".into(),
            ));
        }
        let sizes: Vec<usize> = (0..self.schema.p())
            .map(|r| match self.schema.family(r) {
                Family::Bernoulli => 2,
                Family::Categorical { k, .. } => *k,
                _ => unreachable!(),
            })
            .collect();
        let total: usize = sizes.iter().product();
        let mut rows = Vec::with_capacity(total);
        for mut idx in 0..total {
            let mut row = vec![0.0; self.schema.total_raw_dim()];
            for r in (0..self.schema.p()).rev() {
                row[self.schema.raw_offset(r)] = (idx % sizes[r]) as f64;
                idx /= sizes[r];
            }
            rows.push(row);
        }
        Ok(rows)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ModelDoc::from(self)).expect("model serialization")
    }

    pub fn from_json(text: &str) -> Result<JointModel> {
        let doc: ModelDoc = serde_json::from_str(text)?;
        doc.try_into()
    }
}

/// One node's parameters in its own M-estimation problem: the unpenalized
/// bias plus one pseudo-edge block per other node, kept in ascending node
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeParamVector {
    pub node: usize,
    pub bias: Array1<f64>,
    /// `(t, block)` for every `t != node`, ascending; block is `m_r x m_t`.
    pub blocks: Vec<(usize, Array2<f64>)>,
}

impl NodeParamVector {
    pub fn zeros(schema: &GraphSchema, r: usize) -> NodeParamVector {
        let m_r = schema.stat_dim(r);
        let blocks = (0..schema.p())
            .filter(|&t| t != r)
            .map(|t| (t, Array2::zeros((m_r, schema.stat_dim(t)))))
            .collect();
        NodeParamVector {
            node: r,
            bias: Array1::zeros(m_r),
            blocks,
        }
    }

    /// Flat layout: bias first, then blocks in ascending node index,
    /// row-major within each block.
    pub fn flatten(&self) -> Array1<f64> {
        let total = self.bias.len()
            + self
                .blocks
                .iter()
                .map(|(_, b)| b.len())
                .sum::<usize>();
        let mut out = Vec::with_capacity(total);
        out.extend(self.bias.iter());
        for (_, block) in &self.blocks {
            out.extend(block.iter());
        }
        Array1::from(out)
    }

    /// Inverse of [`flatten`](Self::flatten); rejects wrong-length vectors.
    pub fn unflatten(schema: &GraphSchema, r: usize, v: &[f64]) -> Result<NodeParamVector> {
        let tau = schema.flat_len(r);
        if v.len() != tau {
            return Err(Error::ShapeMismatch(format!(
                "flat vector for node {r} has length {}, expected {tau}",
                v.len()
            )));
        }
        let m_r = schema.stat_dim(r);
        let bias = Array1::from(v[..m_r].to_vec());
        let mut blocks = Vec::new();
        let mut pos = m_r;
        for t in 0..schema.p() {
            if t == r {
                continue;
            }
            let m_t = schema.stat_dim(t);
            let block =
                Array2::from_shape_vec((m_r, m_t), v[pos..pos + m_r * m_t].to_vec()).unwrap();
            pos += m_r * m_t;
            blocks.push((t, block));
        }
        Ok(NodeParamVector {
            node: r,
            bias,
            blocks,
        })
    }

    pub fn block(&self, t: usize) -> Option<&Array2<f64>> {
        self.blocks
            .iter()
            .find(|(idx, _)| *idx == t)
            .map(|(_, b)| b)
    }

    /// Indices of other nodes whose pseudo-edge block is nonzero.
    pub fn active_neighbors(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .filter(|(_, b)| b.iter().any(|&v| v != 0.0))
            .map(|(t, _)| *t)
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct SchemaNodeDoc {
    name: String,
    family: Family,
}

#[derive(Serialize, Deserialize)]
struct EdgeDoc {
    r: usize,
    t: usize,
    /// row-major, shape `m_r x m_t`
    block: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct ModelDoc {
    schema: Vec<SchemaNodeDoc>,
    bias: Vec<Vec<f64>>,
    edges: Vec<EdgeDoc>,
}

impl From<&JointModel> for ModelDoc {
    fn from(m: &JointModel) -> ModelDoc {
        ModelDoc {
            schema: m
                .schema
                .nodes()
                .map(|(n, f)| SchemaNodeDoc {
                    name: n.to_string(),
                    family: f.clone(),
                })
                .collect(),
            bias: m.bias.iter().map(|b| b.to_vec()).collect(),
            edges: m
                .edges()
                .map(|(r, t, b)| EdgeDoc {
                    r,
                    t,
                    block: b.rows().into_iter().map(|row| row.to_vec()).collect(),
                })
                .collect(),
        }
    }
}

impl TryFrom<ModelDoc> for JointModel {
    type Error = Error;

    fn try_from(doc: ModelDoc) -> Result<JointModel> {
        let schema = GraphSchema::new(
            doc.schema
                .into_iter()
                .map(|n| (n.name, n.family))
                .collect(),
        )?;
        let bias = doc.bias.into_iter().map(Array1::from).collect();
        let mut model = JointModel::new(schema, bias)?;
        for e in doc.edges {
            let rows = e.block.len();
            let cols = e.block.first().map(|r| r.len()).unwrap_or(0);
            if e.block.iter().any(|r| r.len() != cols) {
                return Err(Error::ShapeMismatch(format!(
                    "ragged block for edge ({}, {})",
                    e.r, e.t
                )));
            }
            let flat: Vec<f64> = e.block.into_iter().flatten().collect();
            let block = Array2::from_shape_vec((rows, cols), flat)
                .map_err(|e| Error::ShapeMismatch(e.to_string()))?;
            model.set_edge(e.r, e.t, block)?;
        }
        Ok(model)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::arr2;

    fn two_bernoulli() -> GraphSchema {
        GraphSchema::new(vec![
            ("a".into(), Family::Bernoulli),
            ("b".into(), Family::Bernoulli),
        ])
        .unwrap()
    }

    #[test]
    fn schema_rejects_duplicates() {
        assert!(GraphSchema::new(vec![
            ("x".into(), Family::Bernoulli),
            ("x".into(), Family::Gaussian),
        ])
        .is_err());
        assert!(GraphSchema::new(vec![]).is_err());
    }

    #[test]
    fn conditional_reduces_to_bias_without_edges() {
        let schema = two_bernoulli();
        let model = JointModel::new(
            schema,
            vec![Array1::from(vec![0.3]), Array1::from(vec![-0.2])],
        )
        .unwrap();
        let eta = model.conditional_natural_params(0, &[0.0, 1.0]).unwrap();
        assert_eq!(eta, Array1::from(vec![0.3]));
    }

    #[test]
    fn conditional_single_interaction() {
        let schema = two_bernoulli();
        let mut model = JointModel::new(
            schema,
            vec![Array1::zeros(1), Array1::zeros(1)],
        )
        .unwrap();
        model.set_edge(0, 1, arr2(&[[1.0]])).unwrap();
        let eta = model.conditional_natural_params(0, &[0.0, 1.0]).unwrap();
        assert_eq!(eta[0], 1.0);
        // transpose view from the other side
        let eta = model.conditional_natural_params(1, &[1.0, 0.0]).unwrap();
        assert_eq!(eta[0], 1.0);
    }

    #[test]
    fn transposed_storage_matches_dense_reference() {
        // mixed dims: gaussian (2) and dirichlet(3) (3)
        let schema = GraphSchema::new(vec![
            ("g".into(), Family::Gaussian),
            ("d".into(), Family::Dirichlet(3)),
        ])
        .unwrap();
        let block = arr2(&[[0.1, -0.2, 0.3], [0.0, 0.4, -0.5]]);
        let mut model = JointModel::new(
            schema.clone(),
            vec![Family::Gaussian.feasible_point(), Array1::zeros(3)],
        )
        .unwrap();
        model.set_edge(0, 1, block.clone()).unwrap();

        let row = vec![1.5, 0.2, 0.3, 0.5];
        let b_d = Family::Dirichlet(3)
            .sufficient_statistics(&row[1..])
            .unwrap();
        let b_g = Family::Gaussian.sufficient_statistics(&row[..1]).unwrap();

        let eta_g = model.conditional_natural_params(0, &row).unwrap();
        let expect_g = Family::Gaussian.feasible_point() + block.dot(&b_d);
        for i in 0..2 {
            assert_abs_diff_eq!(eta_g[i], expect_g[i], epsilon = 1e-12);
        }

        let eta_d = model.conditional_natural_params(1, &row).unwrap();
        let expect_d = block.t().dot(&b_g);
        for i in 0..3 {
            assert_abs_diff_eq!(eta_d[i], expect_d[i], epsilon = 1e-12);
        }
    }

    #[test]
    fn pseudolikelihood_of_independent_bernoullis() {
        let p = 3;
        let schema = GraphSchema::new(
            (0..p)
                .map(|i| (format!("n{i}"), Family::Bernoulli))
                .collect(),
        )
        .unwrap();
        let model = JointModel::new(schema, vec![Array1::zeros(1); p]).unwrap();
        let val = model.node_log_pseudolikelihood(&[0.0, 1.0, 0.0]).unwrap();
        assert_abs_diff_eq!(val, -(p as f64) * std::f64::consts::LN_2, epsilon = 1e-12);
    }

    #[test]
    fn pseudolikelihood_matches_enumerated_conditionals() {
        // 3-node bernoulli chain with distinct weights
        let schema = GraphSchema::new(
            (0..3)
                .map(|i| (format!("n{i}"), Family::Bernoulli))
                .collect(),
        )
        .unwrap();
        let mut model = JointModel::new(
            schema,
            vec![
                Array1::from(vec![0.2]),
                Array1::from(vec![-0.1]),
                Array1::from(vec![0.4]),
            ],
        )
        .unwrap();
        model.set_edge(0, 1, arr2(&[[0.8]])).unwrap();
        model.set_edge(1, 2, arr2(&[[-0.6]])).unwrap();

        let rows = model.enumerate_configurations().unwrap();
        assert_eq!(rows.len(), 8);
        // normalize the joint exactly
        let pots: Vec<f64> = rows
            .iter()
            .map(|row| model.log_potential(row).unwrap())
            .collect();
        let log_z = crate::expfam::log_sum_exp(&pots);

        for row in &rows {
            let mut expect = 0.0;
            for r in 0..3 {
                // conditional from the normalized joint: potential of the row
                // minus log-sum over node r's two values
                let mut variants = Vec::new();
                for v in [0.0, 1.0] {
                    let mut alt = row.clone();
                    alt[r] = v;
                    variants.push(model.log_potential(&alt).unwrap());
                }
                expect += model.log_potential(row).unwrap() - crate::expfam::log_sum_exp(&variants);
            }
            let got = model.node_log_pseudolikelihood(row).unwrap();
            assert_abs_diff_eq!(got, expect, epsilon = 1e-10);
        }
        // sanity: the joint normalizer is finite
        assert!(log_z.is_finite());
    }

    #[test]
    fn flatten_round_trip() {
        let schema = GraphSchema::new(vec![
            ("a".into(), Family::Gaussian),
            ("b".into(), Family::Bernoulli),
            ("c".into(), Family::Gaussian),
            ("d".into(), Family::Dirichlet(3)),
        ])
        .unwrap();
        // node dims: 2 among others {1, 2, 3} -> tau = 2 * (1 + 6) = 14
        assert_eq!(schema.flat_len(0), 14);

        let mut npv = NodeParamVector::zeros(&schema, 0);
        assert_eq!(npv.flatten(), Array1::<f64>::zeros(14));
        let mut c = 0.0;
        for v in npv.bias.iter_mut() {
            c += 1.0;
            *v = c;
        }
        for (_, b) in npv.blocks.iter_mut() {
            for v in b.iter_mut() {
                c += 1.0;
                *v = c;
            }
        }
        let flat = npv.flatten();
        let back = NodeParamVector::unflatten(&schema, 0, flat.as_slice().unwrap()).unwrap();
        assert_eq!(back, npv);
        assert!(NodeParamVector::unflatten(&schema, 0, &[0.0; 3]).is_err());
    }

    #[test]
    fn conditional_is_affine_in_neighbor_statistics() {
        let schema = GraphSchema::new(vec![
            ("g".into(), Family::Gaussian),
            ("h".into(), Family::Gaussian),
        ])
        .unwrap();
        let block = arr2(&[[0.3, -0.1], [0.2, 0.05]]);
        let mut model = JointModel::new(
            schema,
            vec![
                Family::Gaussian.feasible_point(),
                Family::Gaussian.feasible_point(),
            ],
        )
        .unwrap();
        model.set_edge(0, 1, block.clone()).unwrap();

        let (x1, x2) = (0.7, -1.3);
        let eta_a = model.conditional_natural_params(0, &[0.0, x1]).unwrap();
        let eta_b = model.conditional_natural_params(0, &[0.0, x2]).unwrap();
        let db = Family::Gaussian.sufficient_statistics(&[x1]).unwrap()
            - Family::Gaussian.sufficient_statistics(&[x2]).unwrap();
        let expect = block.dot(&db);
        for i in 0..2 {
            assert_abs_diff_eq!(eta_a[i] - eta_b[i], expect[i], epsilon = 1e-12);
        }
    }

    #[test]
    fn model_json_round_trip_is_exact() {
        let schema = GraphSchema::new(vec![
            ("g".into(), Family::Gaussian),
            ("b".into(), Family::Bernoulli),
        ])
        .unwrap();
        let mut model = JointModel::new(
            schema,
            vec![
                Array1::from(vec![0.1234567890123456789, -0.5]),
                Array1::from(vec![1.0 / 3.0]),
            ],
        )
        .unwrap();
        model
            .set_edge(0, 1, arr2(&[[std::f64::consts::PI], [-1e-17]]))
            .unwrap();
        let text = model.to_json();
        let back = JointModel::from_json(&text).unwrap();
        assert_eq!(back, model);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn zero_block_clears_edge() {
        let schema = two_bernoulli();
        let mut model =
            JointModel::new(schema, vec![Array1::zeros(1), Array1::zeros(1)]).unwrap();
        model.set_edge(0, 1, arr2(&[[0.5]])).unwrap();
        assert!(model.has_edge(1, 0));
        model.set_edge(1, 0, arr2(&[[0.0]])).unwrap();
        assert!(!model.has_edge(0, 1));
        assert_eq!(model.edge(0, 1), None);
    }
}
