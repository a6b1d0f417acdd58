use std::str::FromStr;

/// Sweep grid: `start:stop:count` with inclusive linear spacing, or an
/// explicit comma-separated list.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(Vec<f64>);

impl Grid {
    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

fn number(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            let [start, stop, count] = parts[..] else {
                return Err(format!("`{s}`: expected start:stop:count"));
            };
            let (start, stop) = (number(start)?, number(stop)?);
            let count: usize = count
                .trim()
                .parse()
                .map_err(|_| format!("`{count}` is not a point count"))?;
            return match count {
                0 => Err("grid needs at least one point".into()),
                1 => Ok(Grid(vec![start])),
                n => {
                    let step = (stop - start) / (n - 1) as f64;
                    let mut values: Vec<f64> = (0..n).map(|i| start + i as f64 * step).collect();
                    values[n - 1] = stop;
                    Ok(Grid(values))
                }
            };
        }
        s.split(',').map(number).collect::<Result<Vec<_>, _>>().map(Grid)
    }
}
