use quadvol_core::correlators::global_table;
use quadvol_core::CorrelatorTable;
use std::path::PathBuf;

pub const ENV_VAR: &str = "QUADVOL_CACHE_DIR";
const FILE: &str = "correlators-v1.txt";

/// `$QUADVOL_CACHE_DIR`, else `$XDG_DATA_HOME/quadvol`, else `~/.local/share/quadvol`.
pub fn cache_dir() -> Option<PathBuf> {
    if let Some(d) = std::env::var_os(ENV_VAR).filter(|d| !d.is_empty()) {
        return Some(PathBuf::from(d));
    }
    if let Some(d) = std::env::var_os("XDG_DATA_HOME").filter(|d| !d.is_empty()) {
        return Some(PathBuf::from(d).join("quadvol"));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".local/share/quadvol"))
}

/// Number of entries found in the cache when the process started.
pub fn load() -> usize {
    let Some(path) = cache_dir().map(|d| d.join(FILE)) else { return 0 };
    if !path.exists() {
        return 0;
    }
    match CorrelatorTable::load(&path) {
        Ok(t) => {
            global_table().absorb(&t);
            t.len()
        }
        Err(e) => {
            eprintln!("warning: ignoring correlator cache {}: {e}", path.display());
            0
        }
    }
}

pub fn store(loaded: usize) {
    let table = global_table();
    if table.len() <= loaded {
        return;
    }
    let Some(dir) = cache_dir() else { return };
    let res = std::fs::create_dir_all(&dir)
        .map_err(|e| e.to_string())
        .and_then(|_| table.save(&dir.join(FILE)).map_err(|e| e.to_string()));
    if let Err(e) = res {
        eprintln!("warning: could not write correlator cache: {e}");
    }
}
