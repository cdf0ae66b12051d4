use anyhow::{bail, Context, Result};
use cadselect::probe::ProbeCatalog;

/// Parses `step=..,inflate=..,radii=a:b:c` over the default catalog.
pub fn parse(spec: Option<&str>) -> Result<ProbeCatalog> {
    let mut catalog = ProbeCatalog::default();
    let Some(spec) = spec else {
        return Ok(catalog);
    };
    for item in spec.split(',').filter(|s| !s.trim().is_empty()) {
        let (key, value) = item
            .split_once('=')
            .with_context(|| format!("probe setting `{item}` is not key=value"))?;
        let number = |v: &str| -> Result<f64> {
            let x: f64 = v.trim().parse().with_context(|| format!("`{v}` is not a number"))?;
            if !(x > 0.0 && x.is_finite()) {
                bail!("probe setting `{key}` must be positive");
            }
            Ok(x)
        };
        match key.trim() {
            "step" => catalog.step = number(value)?,
            "inflate" => catalog.inflate = number(value)?,
            "radii" => catalog.radii = value.split(':').map(number).collect::<Result<_>>()?,
            other => bail!("unknown probe setting `{other}`"),
        }
    }
    if catalog.radii.is_empty() {
        bail!("probe catalog needs at least one radius");
    }
    Ok(catalog)
}
