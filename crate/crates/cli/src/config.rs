//! Optional `key=value` config files whose entries mirror the flags.
//!
//! A `--config FILE` anywhere after the subcommand expands the file's
//! entries into `--key value` arguments placed before the user's own flags,
//! so explicitly passed flags always win.

use std::path::Path;

/// Expand `--config FILE` in raw argv. Returns the rewritten argument list.
pub fn expand_config_args(argv: Vec<String>) -> Result<Vec<String>, String> {
    let Some(pos) = argv
        .iter()
        .position(|a| a == "--config" || a.starts_with("--config="))
    else {
        return Ok(argv);
    };

    let (path, consumed) = if let Some(rest) = argv[pos].strip_prefix("--config=") {
        (rest.to_string(), 1)
    } else {
        let Some(value) = argv.get(pos + 1) else {
            return Err("--config needs a file path".into());
        };
        (value.clone(), 2)
    };
    let expanded = parse_config_file(Path::new(&path))?;

    // Keep everything up to (and including) the subcommand, then the config
    // entries, then the user's remaining flags.
    let subcommand_end = 2.min(pos); // argv[0] is the binary, argv[1] the subcommand
    let mut out = argv[..subcommand_end].to_vec();
    out.extend(expanded);
    out.extend_from_slice(&argv[subcommand_end..pos]);
    out.extend_from_slice(&argv[pos + consumed..]);
    Ok(out)
}

fn parse_config_file(path: &Path) -> Result<Vec<String>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut args = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!(
                "{}:{}: expected key=value, got '{raw}'",
                path.display(),
                lineno + 1
            ));
        };
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() {
            return Err(format!("{}:{}: empty key", path.display(), lineno + 1));
        }
        match value {
            "true" => args.push(format!("--{key}")),
            "false" => {}
            _ => {
                args.push(format!("--{key}"));
                args.push(value.to_string());
            }
        }
    }
    Ok(args)
}
