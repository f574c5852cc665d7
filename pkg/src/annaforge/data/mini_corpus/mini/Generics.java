package mini;

import java.util.ArrayList;
import java.util.List;
import java.util.Map;

public class Generics<K, V> {
  private final Map<K, List<V>> table;

  public Generics(Map<K, List<V>> table) {
    this.table = table;
  }

  public List<V> bucket(K key) {
    Object raw = table.get(key);
    List<V> found = (List<V>) raw;
    return found == null ? new ArrayList<>() : found;
  }

  public static <T extends Comparable<T>> T max(List<? extends T> items) {
    T best = items.get(0);
    for (T item : items) {
      if (item.compareTo(best) > 0) {
        best = item;
      }
    }
    return best;
  }
}
