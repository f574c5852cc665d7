package mini;

import java.io.FileInputStream;
import java.io.FileOutputStream;
import java.io.IOException;
import java.io.InputStream;

public class Streams {
  public int firstByte(String path) throws IOException {
    InputStream raw = new FileInputStream(path);
    int value = raw.read();
    return value;
  }

  public void copy(String from, String to) throws IOException {
    InputStream in = new FileInputStream(from);
    FileOutputStream out = new FileOutputStream(to);
    int b = in.read();
    while (b >= 0) {
      out.write(b);
      b = in.read();
    }
    in.close();
    out.close();
  }
}
