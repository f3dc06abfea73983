using System.Collections.Generic;

namespace Store
{
    /// <summary>In-memory key/value store with change counting.</summary>
    public class KeyValueStore
    {
        private readonly Dictionary<string, string> items = new Dictionary<string, string>();

        /// <summary>Number of writes since construction.</summary>
        public int Writes { get; private set; }

        /// <summary>Insert or replace a value.</summary>
        /// <param name="key">lookup key</param>
        /// <param name="value">value to store</param>
        public void Set(string key, string value)
        {
            // every successful set counts as one write
            items[key] = value;
            Writes++;
        }

        /// <summary>Fetch a value, or null when absent.</summary>
        /// <param name="key">lookup key</param>
        /// <returns>stored value or null</returns>
        public string Get(string key)
        {
            return items.TryGetValue(key, out var v) ? v : null;
        }
    }
}
