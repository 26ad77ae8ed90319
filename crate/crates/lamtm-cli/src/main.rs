fn main() -> anyhow::Result<()> {
    lamtm_cli::run()
}
