//! Save a field to the binary container and read it back.

use num_complex::Complex64 as C64;
use wglab::field::io::{read_field, write_field};
use wglab::field::{GridSpec, WaveguideField};

fn main() -> wglab::Result<()> {
    let spec = GridSpec::new(8.0, 16, 3, 0.01)?;
    let f = WaveguideField::from_fn(&spec, |p| C64::new(p[0].cos(), p[1].sin() * p[2].cos()));
    let path = std::env::temp_dir().join("wglab_example_field.bin");
    write_field(&path, &f)?;
    let g = read_field(&path)?;
    println!("{} bytes, round trip exact: {}", std::fs::metadata(&path)?.len(), g == f);
    std::fs::remove_file(&path)?;
    Ok(())
}
