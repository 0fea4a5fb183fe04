use std::path::PathBuf;

/// Settings gathered from an optional `key=value` file and the command line.
/// Keys are the long flag names (`max-regions`, `coverage`, ...).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub model: Option<PathBuf>,
    pub query: Option<String>,
    pub coverage: Option<String>,
    pub max_regions: Option<usize>,
    pub seed: Option<u64>,
    pub mode: Option<String>,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub instantiation: Option<String>,
    pub metric: Option<String>,
    pub threads: Option<usize>,
    pub vary: Option<String>,
}

impl Options {
    /// Blank lines and lines starting with `#` are skipped.
    pub fn from_config(text: &str) -> Result<Options, String> {
        let mut o = Options::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("config line {}: expected key=value", i + 1))?;
            let (k, v) = (k.trim(), v.trim().to_string());
            let bad = |what: &str| format!("config line {}: `{v}` is not {what}", i + 1);
            match k {
                "model" => o.model = Some(v.into()),
                "query" => o.query = Some(v),
                "coverage" => o.coverage = Some(v),
                "max-regions" | "max_regions" => {
                    o.max_regions = Some(v.parse().map_err(|_| bad("a count"))?)
                }
                "seed" => o.seed = Some(v.parse().map_err(|_| bad("a 64-bit seed"))?),
                "mode" => o.mode = Some(v),
                "out" => o.out = Some(v.into()),
                "svg" => o.svg = Some(v.into()),
                "instantiation" => o.instantiation = Some(v),
                "metric" => o.metric = Some(v),
                "threads" => o.threads = Some(v.parse().map_err(|_| bad("a thread count"))?),
                "vary" => o.vary = Some(v),
                _ => return Err(format!("config line {}: unknown key `{k}`", i + 1)),
            }
        }
        Ok(o)
    }
}
