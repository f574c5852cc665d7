package mini;

public class Qualified {
  private java.util.List<String> names = new java.util.ArrayList<String>();
  private java.io.InputStream source;

  public void adopt(java.io.InputStream replacement) {
    source = replacement;
  }

  public java.lang.String first() {
    return names.isEmpty() ? "" : names.get(0);
  }
}
