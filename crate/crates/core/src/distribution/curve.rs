use serde::{Deserialize, Serialize};

use super::exact::{avg_gap_iet_many, avg_gap_rotation_exact_many};
use super::limit::limit_g;
use crate::error::{Error, Result};
use crate::iet::Iet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    Exact,
    Empirical,
    Limit,
}

impl CurveKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CurveKind::Exact => "exact",
            CurveKind::Empirical => "empirical",
            CurveKind::Limit => "limit",
        }
    }
}

/// A gap distribution sampled on a grid of cut-offs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionCurve {
    pub z_values: Vec<f64>,
    pub values: Vec<f64>,
    /// The level; absent for the limit.
    pub n: Option<u64>,
    pub range: (f64, f64),
    pub kind: CurveKind,
}

#[derive(Serialize)]
struct Row<'a> {
    z: f64,
    value: f64,
    #[serde(rename = "N")]
    n: Option<u64>,
    a: f64,
    b: f64,
    kind: &'a str,
}

impl DistributionCurve {
    pub fn exact(a: f64, b: f64, n: u64, zs: &[f64]) -> Result<Self> {
        Ok(Self {
            z_values: zs.to_vec(),
            values: avg_gap_rotation_exact_many(a, b, zs, n)?,
            n: Some(n),
            range: (a, b),
            kind: CurveKind::Exact,
        })
    }

    pub fn empirical(t: &Iet, a: f64, b: f64, n: usize, grid: usize, zs: &[f64]) -> Result<Self> {
        Ok(Self {
            z_values: zs.to_vec(),
            values: avg_gap_iet_many(t, a, b, zs, n, grid)?,
            n: Some(n as u64),
            range: (a, b),
            kind: CurveKind::Empirical,
        })
    }

    /// The limit; `z = 0` is given its limiting value 1.
    pub fn limit(zs: &[f64]) -> Result<Self> {
        let values = zs
            .iter()
            .map(|&z| {
                if z == 0.0 {
                    Ok(1.0)
                } else {
                    limit_g(z).map(|v| v.value)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            z_values: zs.to_vec(),
            values,
            n: None,
            range: (0.0, 1.0),
            kind: CurveKind::Limit,
        })
    }

    /// True when the values never increase along the grid, up to `tol`.
    pub fn is_nonincreasing(&self, tol: f64) -> bool {
        let mut idx: Vec<usize> = (0..self.z_values.len()).collect();
        idx.sort_by(|&i, &j| self.z_values[i].total_cmp(&self.z_values[j]));
        idx.windows(2)
            .all(|w| self.values[w[1]] <= self.values[w[0]] + tol)
    }

    /// CSV with columns `z,value,N,a,b,kind`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for (&z, &value) in self.z_values.iter().zip(&self.values) {
            w.serialize(Row {
                z,
                value,
                n: self.n,
                a: self.range.0,
                b: self.range.1,
                kind: self.kind.as_str(),
            })
            .map_err(|e| Error::validation(e.to_string()))?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::validation(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }
}

/// Parses `START:STOP:STEP` into an inclusive grid.
pub fn parse_z_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::parse(0, "expected START:STOP:STEP"));
    }
    let mut vals = [0.0f64; 3];
    let mut pos = 0;
    for (v, p) in vals.iter_mut().zip(&parts) {
        *v = p
            .trim()
            .parse()
            .map_err(|_| Error::parse(pos, format!("not a number: {p:?}")))?;
        pos += p.len() + 1;
    }
    let [start, stop, step] = vals;
    if !(step > 0.0) || stop < start || start < 0.0 {
        return Err(Error::validation(format!("bad grid {spec}")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if count > 1_000_000 {
        return Err(Error::validation("grid has more than 10^6 points"));
    }
    Ok((0..count).map(|k| start + k as f64 * step).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g = parse_z_grid("0:5:0.05").unwrap();
        assert_eq!(g.len(), 101);
        assert!((g[100] - 5.0).abs() < 1e-12);
        assert!(parse_z_grid("0:1").is_err());
        assert!(parse_z_grid("0:1:0").is_err());
        assert!(matches!(
            parse_z_grid("0:x:1"),
            Err(Error::Parse { pos: 2, .. })
        ));
    }

    #[test]
    fn curves_are_monotone_and_start_at_one() {
        let zs = parse_z_grid("0:4:0.1").unwrap();
        for c in [
            DistributionCurve::exact(0.0, 1.0, 30, &zs).unwrap(),
            DistributionCurve::limit(&zs).unwrap(),
        ] {
            assert!((c.values[0] - 1.0).abs() < 1e-9);
            assert!(c.is_nonincreasing(1e-12));
        }
    }

    #[test]
    fn csv_columns() {
        let c = DistributionCurve::exact(0.0, 1.0, 5, &[0.0, 1.0]).unwrap();
        let text = c.to_csv().unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("z,value,N,a,b,kind"));
        assert!(lines.next().unwrap().starts_with("0.0,1.0,5,0.0,1.0,exact"));
    }
}
