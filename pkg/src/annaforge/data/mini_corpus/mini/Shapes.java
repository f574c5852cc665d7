package mini;

public sealed interface Shapes permits Shapes.Circle, Shapes.Square {
  double area();

  record Circle(double radius) implements Shapes {
    public Circle {
      if (radius < 0.0) {
        throw new IllegalArgumentException("negative radius");
      }
    }

    public double area() {
      return 3.14159265 * radius * radius;
    }
  }

  record Square(double side) implements Shapes {
    public double area() {
      return side * side;
    }
  }
}
