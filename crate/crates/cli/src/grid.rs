use anyhow::{anyhow, bail, Context};

/// A decimal such as `0.25` or a fraction such as `1/3`.
pub fn parse_probability(s: &str) -> anyhow::Result<f64> {
    let value = match s.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().with_context(|| format!("bad numerator in {s:?}"))?;
            let den: f64 = den.trim().parse().with_context(|| format!("bad denominator in {s:?}"))?;
            num / den
        }
        None => s.trim().parse().with_context(|| format!("bad number {s:?}"))?,
    };
    if !(value > 0.0 && value < 1.0) {
        bail!("p = {s} is outside (0, 1)");
    }
    Ok(value)
}

/// Grid points `(n, p)` sorted by `n`, then `p`.
pub fn parse_grid(spec: &str) -> anyhow::Result<Vec<(usize, f64)>> {
    let (ns, ps) = if spec.trim() == "default" {
        ((2..=8).collect::<Vec<_>>(), vec![1.0 / 3.0, 0.5, 2.0 / 3.0, 0.9])
    } else {
        let (mut ns, mut ps) = (None, None);
        for part in spec.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) =
                part.split_once('=').ok_or_else(|| anyhow!("expected key=value, got {part:?}"))?;
            match key.trim() {
                "n" => ns = Some(parse_range(value.trim())?),
                "p" => {
                    ps = Some(value.split(',').map(parse_probability).collect::<anyhow::Result<Vec<_>>>()?)
                }
                other => bail!("unknown grid key {other:?}"),
            }
        }
        (
            ns.ok_or_else(|| anyhow!("grid {spec:?} has no n"))?,
            ps.ok_or_else(|| anyhow!("grid {spec:?} has no p"))?,
        )
    };
    let mut points: Vec<(usize, f64)> =
        ns.iter().flat_map(|&n| ps.iter().map(move |&p| (n, p))).collect();
    points.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    points.dedup();
    Ok(points)
}

fn parse_range(s: &str) -> anyhow::Result<Vec<usize>> {
    let parse = |t: &str| t.trim().parse::<usize>().with_context(|| format!("bad n {t:?}"));
    let out: Vec<usize> = match s.split_once("..") {
        Some((lo, hi)) => {
            let lo = parse(lo)?;
            let hi = match hi.strip_prefix('=') {
                Some(h) => parse(h)?,
                None => parse(hi)?,
            };
            (lo..=hi).collect()
        }
        None => s.split(',').map(parse).collect::<anyhow::Result<_>>()?,
    };
    if out.is_empty() || out.iter().any(|&n| n < 2) {
        bail!("n range {s:?} must be non-empty with n >= 2");
    }
    Ok(out)
}
