package fetch

import "strings"

// Client wraps a base URL and a retry budget.
type Client struct {
	BaseURL string
	Retries int
}

// BuildURL joins the base URL with a relative path.
func (c *Client) BuildURL(path string) string {
	// avoid double slashes at the join point
	base := strings.TrimRight(c.BaseURL, "/")
	return base + "/" + strings.TrimLeft(path, "/")
}

// ShouldRetry reports whether another attempt is allowed.
func (c *Client) ShouldRetry(attempt int) bool {
	return attempt < c.Retries
}

// Normalize lowercases a host name and strips surrounding space.
func Normalize(host string) string {
	return strings.ToLower(strings.TrimSpace(host))
}
