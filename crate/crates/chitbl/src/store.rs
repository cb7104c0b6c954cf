//! Table files on disk.

use std::fs;
use std::path::Path;

use chitbl_core::chitab::{decode_table, encode_table, ChiTable};

use crate::error::CliError;

/// Write the table through a temporary sibling and rename it into place.
pub fn save_table(table: &ChiTable, path: &Path) -> Result<u64, CliError> {
    let bytes = encode_table(table);
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let io = |action, source| CliError::Io { action, path: path.to_path_buf(), source };
    fs::write(&tmp, &bytes).map_err(|e| io("write", e))?;
    fs::rename(&tmp, path).map_err(|e| io("rename into", e))?;
    Ok(bytes.len() as u64)
}

pub fn load_table(path: &Path) -> Result<ChiTable, CliError> {
    let bytes = fs::read(path).map_err(|source| CliError::Io { action: "read", path: path.to_path_buf(), source })?;
    decode_table(&bytes).map_err(|source| CliError::Format { path: path.to_path_buf(), source })
}
