//! Grid specification parsing: `geometric:a:b:n`, `linear:a:b:n`, or a
//! comma-separated list of values.

pub fn parse_grid(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        ["geometric", a, b, n] => {
            let (a, b, n) = parse_abn(a, b, n)?;
            if a <= 0.0 || b <= 0.0 {
                return Err("geometric grid needs positive endpoints".into());
            }
            if n == 1 {
                return Ok(vec![a]);
            }
            let ratio = (b / a).powf(1.0 / (n - 1) as f64);
            let mut t = a;
            Ok((0..n)
                .map(|_| {
                    let v = t;
                    t *= ratio;
                    v
                })
                .collect())
        }
        ["linear", a, b, n] => {
            let (a, b, n) = parse_abn(a, b, n)?;
            if n == 1 {
                return Ok(vec![a]);
            }
            Ok((0..n)
                .map(|k| a + (b - a) * k as f64 / (n - 1) as f64)
                .collect())
        }
        [list] => {
            let vals: Result<Vec<f64>, _> = list
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect();
            let vals = vals.map_err(|e| format!("bad grid value: {e}"))?;
            if vals.is_empty() {
                return Err("empty grid".into());
            }
            Ok(vals)
        }
        _ => Err(format!(
            "unrecognized grid spec '{spec}'; use geometric:a:b:n, linear:a:b:n, or v1,v2,..."
        )),
    }
}

fn parse_abn(a: &str, b: &str, n: &str) -> Result<(f64, f64, usize), String> {
    let a: f64 = a.parse().map_err(|e| format!("bad grid start: {e}"))?;
    let b: f64 = b.parse().map_err(|e| format!("bad grid end: {e}"))?;
    let n: usize = n.parse().map_err(|e| format!("bad grid count: {e}"))?;
    if n == 0 {
        return Err("grid must have at least one point".into());
    }
    Ok((a, b, n))
}
