package mini;

public class Varargs {
  public static String join(String separator, String... parts) {
    StringBuilder out = new StringBuilder();
    for (int i = 0; i < parts.length; i++) {
      if (i > 0) {
        out.append(separator);
      }
      out.append(parts[i]);
      if (out.length() > 4096) {
        break;
      }
    }
    return out.toString();
  }

  public int count(int first, int... rest) {
    return 1 + rest.length;
  }
}
