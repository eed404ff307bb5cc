fn main() {
    // placeholder until the driver lands
}
