use crate::error::CliError;
use crate::system::ParamValues;

pub const MAX_POINTS: usize = 10_000;
const AXES: [&str; 5] = ["gamma0", "N", "gamma", "theta", "T"];

#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub name: &'static str,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, Default)]
pub struct Grid {
    pub axes: Vec<Axis>,
}

#[derive(Clone, Copy, Debug)]
pub struct GridPoint {
    pub values: ParamValues,
    pub horizon: f64,
}

fn parse_number(s: &str, spec: &str) -> Result<f64, CliError> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| CliError::Usage(format!("bad number `{s}` in grid `{spec}`")))
}

/// `name=v1,v2,...` or `name=start:stop:count` (inclusive ends).
pub fn parse_axis(spec: &str) -> Result<Axis, CliError> {
    let (name, body) = spec
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("grid `{spec}` is not of the form name=values")))?;
    let name = AXES
        .iter()
        .find(|a| **a == name.trim())
        .copied()
        .ok_or_else(|| {
            CliError::Usage(format!(
                "unknown grid axis `{name}`, expected one of {}",
                AXES.join(", ")
            ))
        })?;
    let body = body.trim();
    let values = if body.is_empty() {
        Vec::new()
    } else if body.contains(':') {
        let parts: Vec<&str> = body.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::Usage(format!(
                "range `{body}` must be start:stop:count"
            )));
        }
        let (start, stop) = (parse_number(parts[0], spec)?, parse_number(parts[1], spec)?);
        let count: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad count `{}` in grid `{spec}`", parts[2])))?;
        match count {
            0 => Vec::new(),
            1 => vec![start],
            n => (0..n)
                .map(|k| start + (stop - start) * k as f64 / (n - 1) as f64)
                .collect(),
        }
    } else {
        body.split(',')
            .map(|v| parse_number(v, spec))
            .collect::<Result<_, _>>()?
    };
    Ok(Axis { name, values })
}

pub fn parse_grid(specs: &[String]) -> Result<Grid, CliError> {
    let axes: Vec<Axis> = specs
        .iter()
        .map(|s| parse_axis(s))
        .collect::<Result<_, _>>()?;
    for (i, a) in axes.iter().enumerate() {
        if axes[..i].iter().any(|b| b.name == a.name) {
            return Err(CliError::Usage(format!(
                "grid axis `{}` given twice",
                a.name
            )));
        }
    }
    let grid = Grid { axes };
    if grid.len() > MAX_POINTS {
        return Err(CliError::Usage(format!(
            "grid has {} points, limit is {MAX_POINTS}",
            grid.len()
        )));
    }
    Ok(grid)
}

impl Grid {
    /// Number of points; a grid without axes is empty.
    pub fn len(&self) -> usize {
        if self.axes.is_empty() {
            0
        } else {
            self.axes.iter().map(|a| a.values.len()).product()
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn has_axis(&self, name: &str) -> bool {
        self.axes.iter().any(|a| a.name == name)
    }

    /// Cartesian product with the first axis varying slowest.
    pub fn points(&self, base: &ParamValues, horizon: Option<f64>) -> Vec<GridPoint> {
        let n = self.len();
        let derive_gamma =
            (self.has_axis("gamma0") || self.has_axis("N")) && !self.has_axis("gamma");
        (0..n)
            .map(|mut index| {
                let mut values = *base;
                if derive_gamma {
                    values.gamma = None;
                }
                let mut t = horizon.unwrap_or(f64::NAN);
                let mut chosen = vec![0.0; self.axes.len()];
                for (slot, axis) in self.axes.iter().enumerate().rev() {
                    chosen[slot] = axis.values[index % axis.values.len()];
                    index /= axis.values.len();
                }
                for (axis, v) in self.axes.iter().zip(chosen) {
                    match axis.name {
                        "gamma0" => values.gamma0 = Some(v),
                        "N" => values.n = Some(v),
                        "gamma" => values.gamma = Some(v),
                        "theta" => values.theta = Some(v),
                        _ => t = v,
                    }
                }
                GridPoint { values, horizon: t }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_and_ranges() {
        assert_eq!(parse_axis("theta=1,2.5").unwrap().values, vec![1.0, 2.5]);
        assert_eq!(
            parse_axis("T=0:1:5").unwrap().values,
            vec![0.0, 0.25, 0.5, 0.75, 1.0]
        );
        assert_eq!(parse_axis("T=0.3:1:1").unwrap().values, vec![0.3]);
        assert!(parse_axis("T=").unwrap().values.is_empty());
    }

    #[test]
    fn malformed() {
        for bad in ["theta", "phi=1", "T=1:2", "T=a,b", "T=0:1:x", "T=inf"] {
            assert!(parse_axis(bad).is_err(), "{bad}");
        }
        assert!(parse_grid(&["T=1".into(), "T=2".into()]).is_err());
        assert!(parse_grid(&["T=0:1:101".into(), "theta=0:1:100".into()]).is_err());
    }

    #[test]
    fn product_order() {
        let grid = parse_grid(&["theta=1,2".into(), "T=0.1,0.2,0.3".into()]).unwrap();
        let pts = grid.points(&ParamValues::default(), None);
        assert_eq!(pts.len(), 6);
        let pairs: Vec<(f64, f64)> = pts
            .iter()
            .map(|p| (p.values.theta.unwrap(), p.horizon))
            .collect();
        assert_eq!(pairs[0], (1.0, 0.1));
        assert_eq!(pairs[2], (1.0, 0.3));
        assert_eq!(pairs[3], (2.0, 0.1));
        assert!(parse_grid(&[]).unwrap().is_empty());
    }

    #[test]
    fn thermal_rate_is_rederived() {
        let base = ParamValues {
            gamma0: Some(1.0),
            n: Some(100.0),
            gamma: Some(201.0),
            theta: Some(1.0),
        };
        let grid = parse_grid(&["N=1,2".into()]).unwrap();
        assert!(grid
            .points(&base, Some(1.0))
            .iter()
            .all(|p| p.values.gamma.is_none()));
    }
}
