package mini;

import io.annaforge.mock.MockAnnotation;

public enum Events {
  START,
  STOP,
  PAUSE;

  public @interface Tag {
    String value() default "";
  }

  @MockAnnotation
  public String label() {
    return switch (this) {
      case START -> "start";
      case STOP -> "stop";
      default -> "pause";
    };
  }
}
