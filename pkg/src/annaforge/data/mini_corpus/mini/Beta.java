package mini;

public class Beta {
  private int seed;

  private Beta(int seed) {
    this.seed = seed;
  }

  public static Beta of(int seed) {
    return new Beta(seed);
  }

  public int seed() {
    return seed;
  }
}
