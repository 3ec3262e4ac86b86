//! Value specs: `start:stop:count` grids (inclusive) or comma lists.

use crate::error::{Error, Result};

/// Parses a grid `a:b:k` or a list `x1,x2,...`. The result is strictly increasing.
pub fn parse_values(spec: &str) -> Result<Vec<f64>> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Err(Error::InvalidInput("empty value list".into()));
    }
    let values = if spec.contains(':') {
        parse_grid(spec)?
    } else {
        spec.split(',')
            .map(|t| parse_number(t.trim()))
            .collect::<Result<Vec<f64>>>()?
    };
    if !values.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidInput(format!(
            "values in '{spec}' must be strictly increasing"
        )));
    }
    Ok(values)
}

fn parse_number(t: &str) -> Result<f64> {
    let x: f64 = t
        .parse()
        .map_err(|_| Error::InvalidInput(format!("'{t}' is not a number")))?;
    if !x.is_finite() {
        return Err(Error::InvalidInput(format!("'{t}' is not finite")));
    }
    Ok(x)
}

fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
    let [a, b, k] = parts.as_slice() else {
        return Err(Error::InvalidInput(format!(
            "grid '{spec}' must look like start:stop:count"
        )));
    };
    let (start, stop) = (parse_number(a)?, parse_number(b)?);
    let count: usize = k
        .parse()
        .map_err(|_| Error::InvalidInput(format!("grid count '{k}' is not a positive integer")))?;
    uniform_grid(start, stop, count)
}

pub fn uniform_grid(start: f64, stop: f64, count: usize) -> Result<Vec<f64>> {
    match count {
        0 => Err(Error::InvalidInput("grid count must be at least 1".into())),
        1 if start == stop => Ok(vec![start]),
        1 => Err(Error::InvalidInput(
            "a one-point grid needs start == stop".into(),
        )),
        _ if start >= stop => Err(Error::InvalidInput(format!(
            "grid start {start} must be below stop {stop}"
        ))),
        _ => {
            let last = (count - 1) as f64;
            Ok((0..count)
                .map(|i| {
                    if i + 1 == count {
                        stop
                    } else {
                        start + (stop - start) * (i as f64 / last)
                    }
                })
                .collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn lists_and_grids() {
        assert_eq!(parse_values("0.0,0.5,1.0").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_values("110").unwrap(), vec![110.0]);
        assert_eq!(parse_values("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_values("2:2:1").unwrap(), vec![2.0]);
    }

    #[test]
    fn rejects_bad_specs() {
        for bad in ["", "a,b", "1,1", "2,1", "0:1", "0:1:0", "1:0:5", "0:1:1", "0:1:x", "nan", "inf"] {
            assert!(parse_values(bad).is_err(), "{bad}");
        }
    }

    proptest! {
        #[test]
        fn grid_has_exact_count_and_endpoints(
            start in -10.0f64..10.0,
            span in 1e-3f64..50.0,
            count in 2usize..3000,
        ) {
            let stop = start + span;
            let g = uniform_grid(start, stop, count).unwrap();
            prop_assert_eq!(g.len(), count);
            prop_assert_eq!(g[0], start);
            prop_assert_eq!(g[count - 1], stop);
            let h = (stop - start) / (count - 1) as f64;
            let scale = start.abs().max(stop.abs());
            for w in g.windows(2) {
                prop_assert!(w[1] > w[0]);
                // each point carries at most ~1 ulp of the magnitude
                prop_assert!(((w[1] - w[0]) - h).abs() <= 1e-15 * scale.max(h));
            }
        }
    }
}
