//! Parse a config, override a few keys and print the canonical form.

use ris_gbsm::config::parse_config;

fn main() -> ris_gbsm::Result<()> {
    let text = "\
# smaller panel, 3.5 GHz
ris.size_x = 16
ris.size_y = 16
carrier.freq_hz = 3.5e9
sweep.asa_deg = 2, 8
";
    let cfg = parse_config(text)?;
    print!("{}", cfg.serialize());
    match parse_config("ris.size_x = 16\nris.tilt = 3\n") {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
