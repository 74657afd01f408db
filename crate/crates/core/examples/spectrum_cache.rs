//! Persist tables to a cache directory, reload them and show that tampering is caught.
use polarfade::spectrum::{load_tables, obtain_tables, TableConfig};

fn main() -> polarfade::Result<()> {
    let dir = std::env::temp_dir().join("polarfade-cache-example");
    let _ = std::fs::remove_dir_all(&dir);
    let lib = obtain_tables(&TableConfig::up_to(5), Some(&dir))?;
    let reloaded = load_tables(&dir)?;
    println!("round trip equal: {}", reloaded == lib);

    let file = dir.join("split-N8.json");
    let text = std::fs::read_to_string(&file)?.replacen("\"1\"", "\"3\"", 1);
    std::fs::write(&file, text)?;
    match load_tables(&dir) {
        Ok(_) => println!("tampering went unnoticed"),
        Err(e) => println!("rejected: {e}"),
    }
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
