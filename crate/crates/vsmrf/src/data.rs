//! Sample storage: raw heterogeneous rows plus the precomputed stacked
//! sufficient-statistic design matrix every node fit reads from.

use crate::error::{Error, Result};
use crate::model::GraphSchema;
use ndarray::{Array1, Array2, ArrayView1, ArrayView2, s};

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    schema: GraphSchema,
    /// n x total_raw_dim
    raw: Array2<f64>,
    /// n x total_stat_dim, columns grouped by node in schema order
    stats: Array2<f64>,
}

impl Dataset {
    /// Validates every value against its family's domain and precomputes the
    /// stacked statistics.
    pub fn from_raw(schema: GraphSchema, raw: Array2<f64>) -> Result<Dataset> {
        if raw.ncols() != schema.total_raw_dim() {
            return Err(Error::ShapeMismatch(format!(
                "dataset has {} columns, schema needs {}",
                raw.ncols(),
                schema.total_raw_dim()
            )));
        }
        let n = raw.nrows();
        let mut stats = Array2::zeros((n, schema.total_stat_dim()));
        for i in 0..n {
            let row = raw.row(i);
            let row_slice = row.as_slice().expect("contiguous row");
            for r in 0..schema.p() {
                let value = schema.raw_slice(row_slice, r);
                let b = schema
                    .family(r)
                    .sufficient_statistics(value)
                    .map_err(|e| Error::Validation(format!("row {i}: {e}")))?;
                let off = schema.stat_offset(r);
                stats
                    .slice_mut(s![i, off..off + schema.stat_dim(r)])
                    .assign(&b);
            }
        }
        Ok(Dataset { schema, raw, stats })
    }

    pub fn schema(&self) -> &GraphSchema {
        &self.schema
    }

    pub fn n(&self) -> usize {
        self.raw.nrows()
    }

    pub fn raw(&self) -> &Array2<f64> {
        &self.raw
    }

    pub fn raw_row(&self, i: usize) -> ArrayView1<'_, f64> {
        self.raw.row(i)
    }

    /// The full stacked statistic matrix.
    pub fn stats(&self) -> &Array2<f64> {
        &self.stats
    }

    /// Statistic columns belonging to node `r`.
    pub fn node_stats(&self, r: usize) -> ArrayView2<'_, f64> {
        let off = self.schema.stat_offset(r);
        self.stats.slice(s![.., off..off + self.schema.stat_dim(r)])
    }

    /// Statistic vector of node `r` in sample `i`.
    pub fn stats_of(&self, i: usize, r: usize) -> ArrayView1<'_, f64> {
        let off = self.schema.stat_offset(r);
        self.stats.slice(s![i, off..off + self.schema.stat_dim(r)])
    }

    /// Per-coordinate mean of node `r`'s sufficient statistics.
    pub fn stat_mean(&self, r: usize) -> Array1<f64> {
        let view = self.node_stats(r);
        view.mean_axis(ndarray::Axis(0)).unwrap()
    }
}
