package mini;

import java.util.function.Function;
import java.util.function.IntFunction;
import java.util.function.Supplier;

public class Refs {
  public static class Holder {
    private final Object value;

    public Holder(Object value) {
      this.value = value;
    }

    public Object value() {
      return value;
    }
  }

  public Function<Object, Holder> wrap() {
    return Holder::new;
  }

  public Supplier<String> name(Object subject) {
    return subject::toString;
  }

  public IntFunction<int[]> buffers() {
    return int[]::new;
  }

  public Function<String, Integer> measure() {
    return (String text) -> text.length();
  }
}
