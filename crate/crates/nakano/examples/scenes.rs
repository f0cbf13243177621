//! Every built-in scene through the command line's `fredholm` and `profile`
//! commands, writing outputs under `<tmp>/nakano-scenes/<scene>`.

use std::path::Path;

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenes");
    let mut scenes: Vec<_> = std::fs::read_dir(&dir)
        .expect("scenes directory")
        .filter_map(|e| e.ok().map(|e| e.path()))
        .collect();
    scenes.sort();
    for path in scenes {
        let stem = path.file_stem().unwrap().to_string_lossy().into_owned();
        let out = std::env::temp_dir().join("nakano-scenes").join(&stem);
        for cmd in ["profile", "fredholm"] {
            println!("==> {stem} {cmd}");
            let code = nakano::cli::run([
                "nakano".as_ref(),
                "--config".as_ref(),
                path.as_os_str(),
                "--out".as_ref(),
                out.as_os_str(),
                cmd.as_ref(),
            ]);
            println!("exit {code}\n");
        }
    }
}
