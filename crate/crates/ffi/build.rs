use std::env;
use std::path::PathBuf;

fn main() {
    let dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").unwrap());
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    let config = cbindgen::Config::from_file(dir.join("cbindgen.toml")).expect("cbindgen.toml");
    match cbindgen::Builder::new().with_src(dir.join("src").join("lib.rs")).with_config(config).generate() {
        Ok(b) => {
            b.write_to_file(dir.join("include").join("spindle.h"));
        }
        Err(e) => println!("cargo:warning=header not regenerated: {e}"),
    }
}
