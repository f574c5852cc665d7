package mini;

public class Alpha {
  private int cache;
  private String label;

  public Alpha() {}

  public Alpha(String label) {
    this.label = label;
  }

  public String describe() {
    return "alpha:" + label;
  }

  public void relabel(String next) {
    label = next;
  }
}
