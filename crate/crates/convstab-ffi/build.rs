use std::env;

fn main() {
    let crate_dir = env::var("CARGO_MANIFEST_DIR").unwrap();
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");

    match cbindgen::generate(&crate_dir) {
        Ok(bindings) => {
            bindings.write_to_file(format!("{crate_dir}/include/convstab.h"));
        }
        // Syntax errors surface again through rustc with a better message.
        Err(e @ cbindgen::Error::ParseSyntaxError { .. }) => {
            eprintln!("cbindgen parse error: {e:?}");
        }
        Err(e) => panic!("cbindgen: {e:?}"),
    }
}
