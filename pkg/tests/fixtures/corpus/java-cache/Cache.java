package cache;

import java.util.HashMap;
import java.util.Map;

/**
 * Bounded in-memory key/value cache with insertion-order eviction.
 */
public class Cache {
    private final Map<String, String> store = new HashMap<>();
    private final int capacity;

    /**
     * Create a cache holding at most capacity entries.
     *
     * @param capacity maximum number of entries
     */
    public Cache(int capacity) {
        this.capacity = capacity;
    }

    /**
     * Store a value, evicting an arbitrary entry when full.
     *
     * @param key   lookup key
     * @param value value to remember
     */
    public void put(String key, String value) {
        // evict one entry when at capacity
        if (store.size() >= capacity && !store.containsKey(key)) {
            String victim = store.keySet().iterator().next();
            store.remove(victim);
        }
        store.put(key, value);
    }

    /**
     * Look up a value by key.
     *
     * @param key lookup key
     * @return the stored value or null
     */
    public String get(String key) {
        return store.get(key);
    }
}
