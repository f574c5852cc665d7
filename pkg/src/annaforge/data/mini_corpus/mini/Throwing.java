package mini;

import java.io.IOException;

public class Throwing {
  public void validate(int code) throws IOException, IllegalStateException {
    if (code < 0) {
      throw new IOException("negative code");
    }
    if (code > 99) {
      throw new IllegalStateException("code too large");
    }
  }

  public int guarded(int code) {
    try {
      validate(code);
      return code;
    } catch (IOException | IllegalStateException failure) {
      return -1;
    } finally {
      note(code);
    }
  }

  private void note(int code) {
    int stamp = code % 7;
    if (stamp == 0) {
      return;
    }
  }
}
