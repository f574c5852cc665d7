package mini;

public class Grid {
  private final int[][] cells;

  public Grid(int rows, int cols) {
    cells = new int[rows][cols];
  }

  public int[] row(int index) {
    return cells[index];
  }

  public static int[][] identity(int n) {
    long budget = (long) n * n;
    int[][] m = new int[n][];
    for (int i = 0; i < n; i++) {
      m[i] = new int[n];
      m[i][i] = budget > 0 ? 1 : 0;
    }
    return m;
  }
}
