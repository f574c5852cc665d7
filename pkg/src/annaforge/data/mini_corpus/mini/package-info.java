/** Small seed programs exercising the corners analyzers trip over. */
package mini;
